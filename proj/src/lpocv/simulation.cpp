#include "lpocv/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "lpocv/errors.hpp"
#include "lpocv/kahan.hpp"
#include "lpocv/lpo.hpp"

namespace lpocv {

const char* density_kind_name(DensityKind k) noexcept {
  switch (k) {
    case DensityKind::PiecewiseConstant: return "piecewise_constant";
    case DensityKind::HolderCusp: return "holder_cusp";
    case DensityKind::TrigSmooth: return "trig_smooth";
  }
  return "unknown";
}

DensitySpec DensitySpec::uniform() { return piecewise_constant({1.0}, {0.0, 1.0}); }

DensitySpec DensitySpec::piecewise_constant(std::vector<double> heights, std::vector<double> breaks) {
  if (heights.empty() || breaks.size() != heights.size() + 1) {
    fail(ErrorCode::InvalidArgument, "piecewise-constant density needs one more breakpoint than heights");
  }
  if (breaks.front() != 0.0 || breaks.back() != 1.0) fail(ErrorCode::InvalidArgument, "breakpoints must run from 0 to 1");
  KahanSum mass;
  for (std::size_t k = 0; k < heights.size(); ++k) {
    if (!(breaks[k + 1] > breaks[k])) fail(ErrorCode::InvalidArgument, "breakpoints must be strictly increasing");
    if (!(heights[k] >= 0.0) || !std::isfinite(heights[k])) fail(ErrorCode::InvalidArgument, "heights must be finite and >= 0");
    mass += heights[k] * (breaks[k + 1] - breaks[k]);
  }
  if (std::abs(mass.value() - 1.0) > 1e-10) fail(ErrorCode::InvalidArgument, "density does not integrate to 1");
  DensitySpec s;
  s.kind_ = DensityKind::PiecewiseConstant;
  s.heights_ = std::move(heights);
  s.breaks_ = std::move(breaks);
  return s;
}

DensitySpec DensitySpec::holder_cusp(double L, double alpha) {
  if (!(L >= 0.0) || !std::isfinite(L)) fail(ErrorCode::InvalidArgument, "cusp amplitude L must be finite and >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidArgument, "cusp exponent alpha must lie in (0,1]");
  DensitySpec s;
  s.kind_ = DensityKind::HolderCusp;
  s.L_ = L;
  s.alpha_ = alpha;
  s.c_ = 1.0 / (1.0 + L * std::pow(0.5, alpha) / (alpha + 1.0));
  return s;
}

DensitySpec DensitySpec::trig_smooth(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
  const std::size_t k = std::max(cos_coeffs.size(), sin_coeffs.size());
  cos_coeffs.resize(k, 0.0);
  sin_coeffs.resize(k, 0.0);
  double amplitude = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(cos_coeffs[i]) || !std::isfinite(sin_coeffs[i])) fail(ErrorCode::InvalidArgument, "coefficients must be finite");
    amplitude += std::abs(cos_coeffs[i]) + std::abs(sin_coeffs[i]);
  }
  // Sufficient for positivity; keeps the density certified without sampling.
  if (std::numbers::sqrt2 * amplitude > 1.0) {
    fail(ErrorCode::InvalidArgument, "trigonometric density needs sqrt2 * sum(|a_k|+|b_k|) <= 1");
  }
  DensitySpec s;
  s.kind_ = DensityKind::TrigSmooth;
  s.cos_ = std::move(cos_coeffs);
  s.sin_ = std::move(sin_coeffs);
  return s;
}

double DensitySpec::pdf(double x) const {
  switch (kind_) {
    case DensityKind::PiecewiseConstant: {
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
      std::size_t k = static_cast<std::size_t>(it - breaks_.begin());
      k = std::clamp<std::size_t>(k, 1, heights_.size()) - 1;
      return heights_[k];
    }
    case DensityKind::HolderCusp:
      return c_ * (1.0 + L_ * std::pow(std::abs(x - 0.5), alpha_));
    case DensityKind::TrigSmooth: {
      double v = 1.0;
      const double w = 2.0 * std::numbers::pi * x;
      for (std::size_t k = 0; k < cos_.size(); ++k) {
        const double kw = w * static_cast<double>(k + 1);
        v += std::numbers::sqrt2 * (cos_[k] * std::cos(kw) + sin_[k] * std::sin(kw));
      }
      return v;
    }
  }
  return 0.0;
}

double DensitySpec::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  switch (kind_) {
    case DensityKind::PiecewiseConstant: {
      double acc = 0.0;
      for (std::size_t k = 0; k < heights_.size(); ++k) {
        if (x <= breaks_[k + 1]) return acc + heights_[k] * (x - breaks_[k]);
        acc += heights_[k] * (breaks_[k + 1] - breaks_[k]);
      }
      return 1.0;
    }
    case DensityKind::HolderCusp: {
      const double a1 = alpha_ + 1.0;
      const double half = std::pow(0.5, a1);
      if (x < 0.5) return c_ * (x + L_ * (half - std::pow(0.5 - x, a1)) / a1);
      return c_ * (x + L_ * (half + std::pow(x - 0.5, a1)) / a1);
    }
    case DensityKind::TrigSmooth: {
      double v = x;
      const double w = 2.0 * std::numbers::pi * x;
      for (std::size_t k = 0; k < cos_.size(); ++k) {
        const double kk = 2.0 * std::numbers::pi * static_cast<double>(k + 1);
        const double kw = w * static_cast<double>(k + 1);
        v += std::numbers::sqrt2 * (cos_[k] * std::sin(kw) + sin_[k] * (1.0 - std::cos(kw))) / kk;
      }
      return v;
    }
  }
  return 0.0;
}

double DensitySpec::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) fail(ErrorCode::OutOfRange, "quantile level outside [0,1]");
  if (kind_ == DensityKind::PiecewiseConstant) {
    double acc = 0.0;
    for (std::size_t k = 0; k < heights_.size(); ++k) {
      const double mass = heights_[k] * (breaks_[k + 1] - breaks_[k]);
      if (mass > 0.0 && u < acc + mass) return std::min(breaks_[k] + (u - acc) / heights_[k], breaks_[k + 1]);
      acc += mass;
    }
    // u at the top of the mass: last point carrying mass
    for (std::size_t k = heights_.size(); k-- > 0;) {
      if (heights_[k] > 0.0) return breaks_[k + 1];
    }
    return 1.0;
  }
  double lo = 0.0;
  double hi = 1.0;
  double x = u;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double f = cdf(x) - u;
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    const double d = pdf(x);
    double next = d > 0.0 ? x - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-14) {
      x = next;
      break;
    }
    x = next;
  }
  return std::clamp(x, 0.0, 1.0);
}

std::vector<double> DensitySpec::breaks() const {
  switch (kind_) {
    case DensityKind::PiecewiseConstant: return breaks_;
    case DensityKind::HolderCusp: return {0.0, 0.5, 1.0};
    case DensityKind::TrigSmooth: return {0.0, 1.0};
  }
  return {0.0, 1.0};
}

double DensitySpec::lower_bound() const {
  switch (kind_) {
    case DensityKind::PiecewiseConstant: return *std::min_element(heights_.begin(), heights_.end());
    case DensityKind::HolderCusp: return c_;
    case DensityKind::TrigSmooth: {
      double amplitude = 0.0;
      for (std::size_t k = 0; k < cos_.size(); ++k) amplitude += std::abs(cos_[k]) + std::abs(sin_[k]);
      return 1.0 - std::numbers::sqrt2 * amplitude;
    }
  }
  return 0.0;
}

double DensitySpec::squared_norm() const {
  switch (kind_) {
    case DensityKind::PiecewiseConstant: {
      KahanSum acc;
      for (std::size_t k = 0; k < heights_.size(); ++k) acc += heights_[k] * heights_[k] * (breaks_[k + 1] - breaks_[k]);
      return acc.value();
    }
    case DensityKind::HolderCusp: {
      const double a = alpha_;
      return c_ * c_ *
             (1.0 + 2.0 * L_ * std::pow(0.5, a) / (a + 1.0) + L_ * L_ * std::pow(0.5, 2.0 * a) / (2.0 * a + 1.0));
    }
    case DensityKind::TrigSmooth: {
      double acc = 1.0;
      for (std::size_t k = 0; k < cos_.size(); ++k) acc += cos_[k] * cos_[k] + sin_[k] * sin_[k];
      return acc;
    }
  }
  return 0.0;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool is_piecewise_partition(const DensitySpec& spec, const Model& model) {
  return spec.kind() == DensityKind::PiecewiseConstant && model.is_indicator_partition();
}

std::vector<double> cell_probabilities(const DensitySpec& spec, std::size_t cells) {
  std::vector<double> probs(cells);
  const double cd = static_cast<double>(cells);
  double prev = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const double next = k + 1 == cells ? 1.0 : spec.cdf(static_cast<double>(k + 1) / cd);
    probs[k] = next - prev;
    prev = next;
  }
  return probs;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

Sample sample_density(const DensitySpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) fail(ErrorCode::EmptySample, "cannot draw an empty sample");
  std::mt19937_64 rng(seed);
  std::vector<double> xs(n);
  for (auto& x : xs) {
    // 53 random bits; identical across standard libraries unlike generate_canonical
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    x = spec.quantile(u);
  }
  return Sample(std::move(xs));
}

BasisMoments density_moments(const DensitySpec& spec, const Model& model) {
  if (is_piecewise_partition(spec, model)) return basis_moments_partition(model, cell_probabilities(spec, model.cells()));
  const auto br = spec.breaks();
  return basis_moments_quadrature(model, [&](double x) { return spec.pdf(x); }, br);
}

double projection_bias(const DensitySpec& spec, const Model& model, const BasisMoments& moments) {
  if (moments.dim() != model.dim()) fail(ErrorCode::InvalidArgument, "moments do not match the model");
  if (is_piecewise_partition(spec, model)) {
    // Exact: s_m is alpha_k / |I_k| on cell k, s is constant on each merged piece.
    const std::size_t cells = model.cells();
    std::vector<double> cell_breaks(cells + 1);
    for (std::size_t k = 0; k <= cells; ++k) cell_breaks[k] = static_cast<double>(k) / static_cast<double>(cells);
    const auto br = merge_breaks(cell_breaks, spec.piece_breaks());
    KahanSum acc;
    const double root = std::sqrt(static_cast<double>(cells));
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const double mid = 0.5 * (br[i] + br[i + 1]);
      const double sm = moments.mean[cell_of(mid, cells)] * root;
      const double diff = spec.pdf(mid) - sm;
      acc += diff * diff * (br[i + 1] - br[i]);
    }
    return acc.value();
  }
  const auto br = merge_breaks(model.breaks(), spec.breaks());
  return reference_integral(
      [&](double x) {
        double sm = 0.0;
        model.for_each_nonzero(x, [&](std::size_t l, double v) { sm += moments.mean[l] * v; });
        const double diff = spec.pdf(x) - sm;
        return diff * diff;
      },
      br);
}

double projection_bias(const DensitySpec& spec, const Model& model) {
  return projection_bias(spec, model, density_moments(spec, model));
}

double true_risk(const DensitySpec& spec, const Model& model, std::size_t n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be positive");
  const BasisMoments m = density_moments(spec, model);
  return projection_bias(spec, model, m) + m.variance_sum() / static_cast<double>(n);
}

std::size_t PRule::resolve(std::size_t n) const {
  switch (kind) {
    case Kind::Fixed: {
      if (!(value >= 1.0) || value != std::floor(value)) fail(ErrorCode::InvalidP, "fixed p must be a positive integer");
      const auto p = static_cast<std::size_t>(value);
      check_p(n, p);
      return p;
    }
    case Kind::Fraction: {
      if (!(value > 0.0 && value < 1.0)) fail(ErrorCode::InvalidP, "p fraction must lie in (0,1)");
      if (n < 2) fail(ErrorCode::InvalidP, "n must be >= 2");
      const double p = std::clamp(std::round(value * static_cast<double>(n)), 1.0, static_cast<double>(n - 1));
      return static_cast<std::size_t>(p);
    }
    case Kind::Auto: {
      const auto eps = solve_epsilon(n);
      if (!eps) fail(ErrorCode::Infeasible, "no epsilon satisfies the admissibility inequality at n = " + std::to_string(n));
      const PRange range = admissible_p_range(n, eps->epsilon, 0.01, 0.01);
      if (range.empty) fail(ErrorCode::Infeasible, "admissible p range is empty at n = " + std::to_string(n));
      return range.midpoint();
    }
  }
  fail(ErrorCode::Internal, "unknown p rule");
}

namespace {

struct ModelTruth {
  BasisMoments moments;
  double bias = 0.0;
  double risk = 0.0;
};

struct Replicate {
  double loss = 0.0;
  double dim = 0.0;
  double loo_loss = 0.0;
};

// One n of an experiment: everything that does not depend on the sample.
struct Stage {
  Collection collection;
  std::vector<ModelTruth> truth;
  std::size_t oracle = 0;
  std::size_t p = 0;
  bool nested_trig = false;
};

Stage prepare(const ExperimentConfig& config, std::size_t n) {
  Stage st;
  st.collection = build_collection(config.collection, n, config.collection_params);
  st.p = config.p_rule.resolve(n);
  st.nested_trig = config.collection == CollectionKind::Tp;
  const auto& models = st.collection.models;
  st.truth.resize(models.size());
  if (st.nested_trig) {
    // Trigonometric models are nested: moments of the largest one restrict to the others.
    const BasisMoments big = density_moments(config.density, models.back());
    for (std::size_t i = 0; i < models.size(); ++i) {
      const std::size_t d = models[i].dim();
      BasisMoments m;
      m.mean.assign(big.mean.begin(), big.mean.begin() + static_cast<std::ptrdiff_t>(d));
      m.second.resize(d * d);
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) m.second[a * d + b] = big.second_at(a, b);
      }
      m.third.assign(big.third.begin(), big.third.begin() + static_cast<std::ptrdiff_t>(d));
      // phi_m_cross and phi_m_second depend on the full model; not needed for risks.
      st.truth[i].moments = std::move(m);
    }
  } else {
    for (std::size_t i = 0; i < models.size(); ++i) st.truth[i].moments = density_moments(config.density, models[i]);
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    auto& t = st.truth[i];
    t.bias = projection_bias(config.density, models[i], t.moments);
    t.risk = t.bias + t.moments.variance_sum() / static_cast<double>(n);
  }
  for (std::size_t i = 1; i < models.size(); ++i) {
    const auto& a = st.truth[i];
    const auto& b = st.truth[st.oracle];
    if (a.risk < b.risk || (a.risk == b.risk && models[i].dim() < models[st.oracle].dim())) st.oracle = i;
  }
  return st;
}

std::size_t argmin_risk(const std::vector<double>& risks, const std::vector<Model>& models) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < risks.size(); ++i) {
    if (risks[i] < risks[best] || (risks[i] == risks[best] && models[i].dim() < models[best].dim())) best = i;
  }
  return best;
}

// ||s - s_hat_m||^2 = ||s - s_m||^2 + sum_l (a_l - P phi_l)^2 by orthogonality.
double loss_of(const ModelTruth& t, const SufficientStats& stats, std::size_t dim) {
  const double nd = static_cast<double>(stats.n);
  KahanSum acc;
  for (std::size_t l = 0; l < dim; ++l) {
    const double diff = stats.sums[l] / nd - t.moments.mean[l];
    acc += diff * diff;
  }
  return t.bias + acc.value();
}

SufficientStats truncate(const SufficientStats& s, std::size_t dim) {
  SufficientStats out;
  out.n = s.n;
  out.sums.assign(s.sums.begin(), s.sums.begin() + static_cast<std::ptrdiff_t>(dim));
  out.sums_sq.assign(s.sums_sq.begin(), s.sums_sq.begin() + static_cast<std::ptrdiff_t>(dim));
  return out;
}

Replicate run_replicate(const ExperimentConfig& config, const Stage& st, std::size_t n, std::size_t rep, bool loo) {
  const Sample sample = sample_density(config.density, n, stream_seed(config.seed, rep, n));
  const auto& models = st.collection.models;
  std::vector<SufficientStats> stats(models.size());
  if (st.nested_trig) {
    const SufficientStats big = sufficient_stats(models.back(), sample);
    for (std::size_t i = 0; i < models.size(); ++i) stats[i] = truncate(big, models[i].dim());
  } else {
    for (std::size_t i = 0; i < models.size(); ++i) stats[i] = sufficient_stats(models[i], sample);
  }
  std::vector<double> risks(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) risks[i] = lpo_risk_from_stats(stats[i], st.p);
  const std::size_t chosen = argmin_risk(risks, models);
  Replicate r;
  r.loss = loss_of(st.truth[chosen], stats[chosen], models[chosen].dim());
  r.dim = static_cast<double>(models[chosen].dim());
  if (loo) {
    for (std::size_t i = 0; i < models.size(); ++i) risks[i] = lpo_risk_from_stats(stats[i], 1);
    const std::size_t c1 = argmin_risk(risks, models);
    r.loo_loss = loss_of(st.truth[c1], stats[c1], models[c1].dim());
  }
  return r;
}

std::vector<Replicate> run_replicates(const ExperimentConfig& config, const Stage& st, std::size_t n, bool loo) {
  const std::size_t reps = config.replications;
  std::vector<Replicate> out(reps);
  unsigned threads = config.threads == 0 ? default_thread_count() : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
  if (threads <= 1) {
    for (std::size_t r = 0; r < reps; ++r) out[r] = run_replicate(config, st, n, r, loo);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) out[r] = run_replicate(config, st, n, r, loo);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

template <class Get>
MeanSe mean_se(const std::vector<Replicate>& reps, Get get) {
  KahanSum sum;
  for (const auto& r : reps) sum += get(r);
  const double k = static_cast<double>(reps.size());
  MeanSe out;
  out.mean = sum.value() / k;
  if (reps.size() > 1) {
    KahanSum ss;
    for (const auto& r : reps) {
      const double d = get(r) - out.mean;
      ss += d * d;
    }
    out.se = std::sqrt(ss.value() / (k - 1.0) / k);
  }
  return out;
}

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

void validate(const ExperimentConfig& config) {
  if (config.replications < 1) fail(ErrorCode::InvalidArgument, "replications must be >= 1");
  if (config.n_grid.empty()) fail(ErrorCode::InvalidArgument, "n grid is empty");
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] < 2) fail(ErrorCode::InvalidArgument, "n grid values must be >= 2");
    if (i > 0 && config.n_grid[i] <= config.n_grid[i - 1]) fail(ErrorCode::InvalidArgument, "n grid must be strictly increasing");
  }
}

}  // namespace

RatioReport oracle_ratio_experiment(const ExperimentConfig& config) {
  validate(config);
  RatioReport report;
  report.replications = config.replications;
  report.seed = config.seed;
  for (std::size_t n : config.n_grid) {
    const Stage st = prepare(config, n);
    const auto reps = run_replicates(config, st, n, config.compare_loo);
    const MeanSe loss = mean_se(reps, [](const Replicate& r) { return r.loss; });
    const MeanSe dim = mean_se(reps, [](const Replicate& r) { return r.dim; });
    RatioRow row;
    row.n = n;
    row.p = st.p;
    row.mean_risk = loss.mean;
    row.stderr_risk = loss.se;
    row.oracle_risk = st.truth[st.oracle].risk;
    row.oracle_dim = st.collection.models[st.oracle].dim();
    row.oracle_model = st.collection.models[st.oracle].name();
    row.ratio = safe_ratio(loss.mean, row.oracle_risk);
    row.ci_low = safe_ratio(std::max(0.0, loss.mean - 1.96 * loss.se), row.oracle_risk);
    row.ci_high = safe_ratio(loss.mean + 1.96 * loss.se, row.oracle_risk);
    row.mean_dim = dim.mean;
    if (config.compare_loo) {
      const MeanSe loo = mean_se(reps, [](const Replicate& r) { return r.loo_loss; });
      row.loo_mean_risk = loo.mean;
      row.loo_ratio = safe_ratio(loo.mean, row.oracle_risk);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

SlopeReport adaptivity_slope_experiment(const ExperimentConfig& config) {
  validate(config);
  if (config.n_grid.size() < 2 ||
      static_cast<double>(config.n_grid.back()) < 10.0 * static_cast<double>(config.n_grid.front())) {
    fail(ErrorCode::InvalidArgument, "n grid must span at least one decade");
  }
  SlopeReport report;
  report.replications = config.replications;
  report.seed = config.seed;
  std::vector<double> xs, ys;
  for (std::size_t n : config.n_grid) {
    const Stage st = prepare(config, n);
    const auto reps = run_replicates(config, st, n, false);
    const MeanSe loss = mean_se(reps, [](const Replicate& r) { return r.loss; });
    const MeanSe dim = mean_se(reps, [](const Replicate& r) { return r.dim; });
    if (!(loss.mean > 0.0)) fail(ErrorCode::Infeasible, "mean risk vanished at n = " + std::to_string(n) + "; slope undefined");
    report.rows.push_back({n, st.p, loss.mean, loss.se, st.truth[st.oracle].risk, dim.mean});
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(loss.mean));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  report.slope = sxy / sxx;
  report.intercept = my - report.slope * mx;
  if (xs.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - report.intercept - report.slope * xs[i];
      ssr += e * e;
    }
    report.slope_stderr = std::sqrt(ssr / (k - 2.0) / sxx);
  }
  return report;
}

double holder_histogram_bias_bound(double holder_constant, double alpha, std::size_t bins) {
  if (bins == 0) fail(ErrorCode::InvalidArgument, "bins must be positive");
  const double c = 4.0 * (alpha + 2.0) / ((1.0 + alpha) * (1.0 + alpha) * (2.0 * alpha + 3.0));
  return c * holder_constant * holder_constant * std::pow(static_cast<double>(bins), -2.0 * alpha);
}

}  // namespace lpocv
