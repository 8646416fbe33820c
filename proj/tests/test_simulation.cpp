#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "lpocv/estimator.hpp"
#include "lpocv/simulation.hpp"
#include "test_support.hpp"

using namespace lpocv;
using lpocv_test::near;

namespace {

std::vector<DensitySpec> all_specs() {
  return {DensitySpec::uniform(),
          DensitySpec::piecewise_constant({0.4, 1.6, 1.0}, {0.0, 0.25, 0.5, 1.0}),
          DensitySpec::holder_cusp(1.0, 1.0),
          DensitySpec::holder_cusp(4.0, 0.5),
          DensitySpec::trig_smooth({0.3, 0.0, 0.1}, {0.0, 0.2, 0.0})};
}

double ks_statistic(const DensitySpec& spec, std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = spec.cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

ExperimentConfig slope_config(DensitySpec density, CollectionKind kind) {
  ExperimentConfig c;
  c.density = std::move(density);
  c.collection = kind;
  c.p_rule = PRule::fraction(0.5);
  for (int e = 8; e <= 13; ++e) c.n_grid.push_back(std::size_t{1} << e);
  c.replications = 200;
  c.seed = 0;
  return c;
}

}  // namespace

TEST_CASE("densities integrate to one and are nonnegative") {
  for (const auto& spec : all_specs()) {
    CAPTURE(density_kind_name(spec.kind()));
    const auto br = spec.breaks();
    CHECK(near(reference_integral([&](double x) { return spec.pdf(x); }, br), 1.0, 1e-10));
    for (int i = 0; i <= 1000; ++i) CHECK(spec.pdf(i / 1000.0) >= 0.0);
    CHECK(spec.cdf(0.0) == 0.0);
    CHECK(near(spec.cdf(1.0), 1.0, 1e-12));
    for (double x : {0.05, 0.3, 0.5, 0.77}) CHECK(near(spec.quantile(spec.cdf(x)), x, 1e-10));
    CHECK(near(spec.squared_norm(), reference_integral([&](double x) { return spec.pdf(x) * spec.pdf(x); }, br), 1e-9));
    double lowest = INFINITY;
    for (int i = 0; i <= 10000; ++i) lowest = std::min(lowest, spec.pdf(i / 10000.0));
    CHECK(spec.lower_bound() <= lowest + 1e-12);
  }
  CHECK(lpocv_test::error_code_of([] { (void)DensitySpec::piecewise_constant({1.0, 0.5}, {0.0, 0.5, 1.0}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(lpocv_test::error_code_of([] { (void)DensitySpec::holder_cusp(1.0, 1.5); }) == ErrorCode::InvalidArgument);
  CHECK(lpocv_test::error_code_of([] { (void)DensitySpec::trig_smooth({0.5}, {0.5}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("the cusp family is Hoelder with the documented constant") {
  std::mt19937_64 rng(51);
  for (const auto& spec : {DensitySpec::holder_cusp(1.0, 1.0), DensitySpec::holder_cusp(3.0, 0.5),
                           DensitySpec::holder_cusp(2.0, 0.25)}) {
    for (int i = 0; i < 20000; ++i) {
      const double x = lpocv_test::uniform01(rng), y = lpocv_test::uniform01(rng);
      if (x == y) continue;
      CHECK(std::abs(spec.pdf(x) - spec.pdf(y)) <= spec.holder_constant() * std::pow(std::abs(x - y), spec.alpha()) + 1e-14);
    }
    const double c = spec.cusp_constant();
    CHECK(near(c, 1.0 / (1.0 + spec.L() * std::pow(0.5, spec.alpha()) / (spec.alpha() + 1.0)), 1e-15));
  }
}

TEST_CASE("sampling") {
  const auto u = DensitySpec::uniform();
  int passes = 0;
  constexpr int kSeeds = 100;
  const std::size_t n = 10000;
  const double critical = 1.628 / std::sqrt(static_cast<double>(n));  // 1% two-sided
  for (int seed = 0; seed < kSeeds; ++seed) {
    const Sample s = sample_density(u, n, static_cast<std::uint64_t>(seed));
    passes += ks_statistic(u, {s.values().begin(), s.values().end()}) < critical;
  }
  CHECK(passes >= 95);

  for (const auto& spec : all_specs()) {
    int ok = 0;
    for (int seed = 0; seed < 40; ++seed) {
      const Sample s = sample_density(spec, 5000, stream_seed(seed, 9));
      ok += ks_statistic(spec, {s.values().begin(), s.values().end()}) < 1.628 / std::sqrt(5000.0);
    }
    CAPTURE(density_kind_name(spec.kind()));
    CHECK(ok >= 38);
  }

  const auto left = DensitySpec::piecewise_constant({2.0, 0.0}, {0.0, 0.5, 1.0});
  for (double x : sample_density(left, 10000, 3).values()) CHECK(x < 0.5);

  const Sample a = sample_density(DensitySpec::holder_cusp(1.0, 0.5), 777, 42);
  const Sample b = sample_density(DensitySpec::holder_cusp(1.0, 0.5), 777, 42);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::bit_cast<std::uint64_t>(a[i]) == std::bit_cast<std::uint64_t>(b[i]));
  const Sample c = sample_density(DensitySpec::holder_cusp(1.0, 0.5), 777, 43);
  CHECK(a[0] != c[0]);
}

TEST_CASE("stream seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t a = 0; a < 200; ++a)
      for (std::uint64_t b = 0; b < 5; ++b) seen.insert(stream_seed(s, a, b));
  CHECK(seen.size() == 4 * 200 * 5);
}

TEST_CASE("basis moments under known densities") {
  const auto h = density_moments(DensitySpec::uniform(), Model::histogram(2));
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(near(h.mean[l], std::numbers::sqrt2 / 2.0, 1e-15));
    CHECK(near(h.second_at(l, l), 1.0, 1e-15));
  }
  const auto t = density_moments(DensitySpec::uniform(), Model::trigonometric(3));
  CHECK(near(t.mean[0], 1.0, 1e-12));
  for (std::size_t l = 1; l < t.dim(); ++l) {
    CHECK(near(t.mean[l], 0.0, 1e-10));
    CHECK(near(t.second_at(l, l), 1.0, 1e-10));
  }
  for (const auto& spec : all_specs()) {
    const auto c = density_moments(spec, Model::histogram(1));
    CHECK(near(c.mean[0], 1.0, 1e-10));
    CHECK(near(c.variance_sum(), 0.0, 1e-10));
  }
  // Analytic partition moments agree with the quadrature route.
  const auto pw = DensitySpec::piecewise_constant({0.4, 1.6, 1.0}, {0.0, 0.25, 0.5, 1.0});
  const auto exact = density_moments(pw, Model::histogram(4));
  const auto quad = basis_moments_quadrature(Model::histogram(4), [&](double x) { return pw.pdf(x); }, pw.breaks());
  for (std::size_t l = 0; l < 4; ++l) {
    CHECK(near(exact.mean[l], quad.mean[l], 1e-10));
    CHECK(near(exact.second_at(l, l), quad.second_at(l, l), 1e-10));
    CHECK(near(exact.third[l], quad.third[l], 1e-10));
  }
  CHECK(near(exact.phi_m_second, quad.phi_m_second, 1e-9));
}

TEST_CASE("true risk") {
  for (std::size_t n : {1u, 10u, 1000u}) {
    CHECK(near(true_risk(DensitySpec::uniform(), Model::histogram(1), n), 0.0, 1e-12));
    CHECK(near(true_risk(DensitySpec::uniform(), Model::histogram(2), n), 1.0 / n, 1e-12));
  }
  // Bias part equals ||s||^2 - ||s_m||^2 for an orthogonal projection.
  for (const auto& spec : all_specs()) {
    for (const Model& m : {Model::histogram(5), Model::trigonometric(2), Model::piecewise_polynomial(2, 2)}) {
      const auto mom = density_moments(spec, m);
      CHECK(near(projection_bias(spec, m), spec.squared_norm() - mom.projection_norm2(), 1e-9));
      CHECK(projection_bias(spec, m) >= -1e-12);
    }
  }
}

TEST_CASE("variance part of the true risk by Monte Carlo") {
  const auto spec = DensitySpec::holder_cusp(2.0, 0.5);
  for (const Model& m : {Model::histogram(6), Model::trigonometric(2)}) {
    const auto mom = density_moments(spec, m);
    const std::size_t n = 50;
    constexpr std::size_t kReps = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t r = 0; r < kReps; ++r) {
      const auto est = fit_projection(m, sample_density(spec, n, stream_seed(61, r)));
      double loss = 0.0;
      for (std::size_t l = 0; l < m.dim(); ++l) loss += (est.coeffs()[l] - mom.mean[l]) * (est.coeffs()[l] - mom.mean[l]);
      sum += loss;
      sum2 += loss * loss;
    }
    const double mean = sum / kReps;
    const double se = std::sqrt((sum2 / kReps - mean * mean) / kReps);
    const double expected = true_risk(spec, m, n) - projection_bias(spec, m);
    CHECK(near(expected, mom.variance_sum() / n, 1e-12));
    CHECK(std::abs(mean - expected) <= 4.0 * se);
  }
}

TEST_CASE("Hoelder bias bound for histograms") {
  for (double alpha : {1.0, 0.5}) {
    const double c_alpha = 4.0 * (alpha + 2.0) / ((1.0 + alpha) * (1.0 + alpha) * (2.0 * alpha + 3.0));
    CHECK(near(holder_histogram_bias_bound(1.0, alpha, 1), c_alpha, 1e-15));
    for (double L : {1.0, 5.0}) {
      const auto spec = DensitySpec::holder_cusp(L, alpha);
      for (std::size_t d : {1u, 2u, 3u, 7u, 16u, 40u}) {
        const double bound = c_alpha * std::pow(spec.holder_constant(), 2.0) * std::pow(static_cast<double>(d), -2.0 * alpha);
        CHECK(near(holder_histogram_bias_bound(spec.holder_constant(), alpha, d), bound, 1e-14));
        CHECK(projection_bias(spec, Model::histogram(d)) <= bound);
      }
    }
  }
}

TEST_CASE("p rules") {
  CHECK(PRule::fraction(0.5).resolve(256) == 128);
  CHECK(PRule::fixed(7).resolve(100) == 7);
  CHECK(PRule{}.resolve(1000) == 500);
  const std::size_t p_auto = PRule::automatic().resolve(256);
  const auto range = admissible_p_range(256, solve_epsilon(256)->epsilon, 0.01, 0.01);
  CHECK(p_auto == range.midpoint());
  CHECK(lpocv_test::error_code_of([] { (void)PRule::automatic().resolve(29); }) == ErrorCode::Infeasible);
  CHECK(lpocv_test::error_code_of([] { (void)PRule::fixed(100).resolve(100); }) == ErrorCode::InvalidP);
  CHECK(lpocv_test::error_code_of([] { (void)PRule::fraction(1.0).resolve(100); }) == ErrorCode::InvalidP);
}

TEST_CASE("oracle ratio on a singleton collection is about one") {
  // With max_dim = 1 the collection is the constant model alone.
  ExperimentConfig c;
  c.density = DensitySpec::holder_cusp(2.0, 1.0);
  c.collection = CollectionKind::Pc;
  c.collection_params.max_dim = 1;
  c.n_grid = {64, 200};
  c.replications = 4000;
  c.compare_loo = false;
  const auto rep = oracle_ratio_experiment(c);
  REQUIRE(rep.rows.size() == 2);
  for (const auto& row : rep.rows) {
    CHECK(row.oracle_dim == 1);
    CHECK(std::abs(row.mean_risk - row.oracle_risk) <= 4.0 * row.stderr_risk + 1e-12);
    CHECK(near(row.ratio, 1.0, 1e-9));
    CHECK(row.ci_low <= row.ratio);
    CHECK(row.ratio <= row.ci_high);
  }
  CollectionParams one;
  one.max_dim = 6;
  c.collection_params = one;
  c.density = DensitySpec::piecewise_constant({0.5, 1.5}, {0.0, 0.5, 1.0});
  c.n_grid = {100};
  c.replications = 300;
  c.compare_loo = true;
  const auto r2 = oracle_ratio_experiment(c);
  CHECK(r2.rows[0].loo_ratio.has_value());
  CHECK(std::isfinite(r2.rows[0].ratio));
  CHECK(std::isfinite(*r2.rows[0].loo_ratio));
}

TEST_CASE("experiments are reproducible and thread-count independent") {
  ExperimentConfig c;
  c.density = DensitySpec::holder_cusp(1.0, 1.0);
  c.n_grid = {50, 120};
  c.replications = 60;
  c.seed = 9;
  c.threads = 1;
  const auto a = oracle_ratio_experiment(c);
  c.threads = 3;
  const auto b = oracle_ratio_experiment(c);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].mean_risk == b.rows[i].mean_risk);
    CHECK(a.rows[i].stderr_risk == b.rows[i].stderr_risk);
    CHECK(a.rows[i].mean_dim == b.rows[i].mean_dim);
    CHECK(*a.rows[i].loo_mean_risk == *b.rows[i].loo_mean_risk);
  }
  c.seed = 10;
  CHECK(oracle_ratio_experiment(c).rows[0].mean_risk != a.rows[0].mean_risk);

  ExperimentConfig s;
  s.density = DensitySpec::holder_cusp(1.0, 1.0);
  s.n_grid = {20, 60, 200};
  s.replications = 30;
  const auto s1 = adaptivity_slope_experiment(s);
  s.threads = 2;
  const auto s2 = adaptivity_slope_experiment(s);
  CHECK(s1.slope == s2.slope);
  CHECK(s1.slope_stderr == s2.slope_stderr);
  // The slope is the least-squares fit through the reported rows.
  double mx = 0, my = 0;
  for (const auto& r : s1.rows) {
    mx += std::log(static_cast<double>(r.n));
    my += std::log(r.mean_risk);
  }
  mx /= s1.rows.size();
  my /= s1.rows.size();
  double sxy = 0, sxx = 0;
  for (const auto& r : s1.rows) {
    const double dx = std::log(static_cast<double>(r.n)) - mx;
    sxy += dx * (std::log(r.mean_risk) - my);
    sxx += dx * dx;
  }
  CHECK(near(s1.slope, sxy / sxx, 1e-12));
  CHECK(near(s1.intercept, my - s1.slope * mx, 1e-12));
}

TEST_CASE("degenerate grids are rejected") {
  using lpocv_test::error_code_of;
  ExperimentConfig c;
  c.replications = 2;
  c.n_grid = {100, 500};
  CHECK(error_code_of([&] { (void)adaptivity_slope_experiment(c); }) == ErrorCode::InvalidArgument);
  c.n_grid = {100, 50, 2000};
  CHECK(error_code_of([&] { (void)adaptivity_slope_experiment(c); }) == ErrorCode::InvalidArgument);
  c.n_grid = {};
  CHECK(error_code_of([&] { (void)oracle_ratio_experiment(c); }) == ErrorCode::InvalidArgument);
  c.n_grid = {100};
  c.replications = 0;
  CHECK(error_code_of([&] { (void)oracle_ratio_experiment(c); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("uniform density slope" * doctest::description("selected-model risk slope for the uniform density")) {
  const auto rep = adaptivity_slope_experiment(slope_config(DensitySpec::uniform(), CollectionKind::Pc));
  MESSAGE("uniform (Pc) slope " << rep.slope << " se " << rep.slope_stderr);
  CHECK(rep.slope >= -1.15);
  CHECK(rep.slope <= -0.85);
}
