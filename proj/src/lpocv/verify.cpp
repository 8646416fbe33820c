#include "lpocv/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "lpocv/bases.hpp"
#include "lpocv/estimator.hpp"
#include "lpocv/lpo.hpp"

namespace lpocv {

namespace {

constexpr std::array<Family, 5> kFamilies = {Family::Histogram, Family::Trigonometric, Family::HaarScaling,
                                             Family::HaarWavelet, Family::PiecewisePolynomial};

std::size_t uniform_int(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

Model random_model(Family f, std::mt19937_64& rng) {
  switch (f) {
    case Family::Histogram: return Model::histogram(uniform_int(rng, 1, 8));
    case Family::Trigonometric: return Model::trigonometric(uniform_int(rng, 0, 4));
    case Family::HaarScaling: return Model::haar_scaling(static_cast<unsigned>(uniform_int(rng, 0, 3)));
    case Family::HaarWavelet: return Model::haar_wavelet(static_cast<unsigned>(uniform_int(rng, 0, 2)));
    case Family::PiecewisePolynomial:
      return Model::piecewise_polynomial(static_cast<unsigned>(uniform_int(rng, 0, 2)),
                                         static_cast<unsigned>(uniform_int(rng, 1, 3)));
  }
  return Model::histogram(1);
}

Sample random_sample(std::size_t n, std::mt19937_64& rng) {
  // Mostly continuous draws, with some cell edges and repeated values mixed in.
  constexpr std::array<double, 5> edges = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> xs(n);
  for (auto& x : xs) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    if (rng() % 10 == 0) {
      x = edges[rng() % edges.size()];
    } else {
      x = u;
    }
  }
  return Sample(std::move(xs));
}

double rel_error(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& options) {
  std::mt19937_64 rng(options.seed);
  VerifyReport report;
  for (Family f : kFamilies) report.families.push_back({family_name(f), 0, 0, 0, 0.0});

  auto record = [&](std::size_t fam, VerifyCheck check) {
    check.rel_error = rel_error(check.value, check.reference);
    check.pass = check.rel_error <= options.tolerance;
    auto& s = report.families[fam];
    ++s.checks;
    ++report.checks;
    s.max_rel_error = std::max(s.max_rel_error, check.rel_error);
    report.max_rel_error = std::max(report.max_rel_error, check.rel_error);
    if (!check.pass) {
      ++s.failures;
      report.failures.push_back(std::move(check));
    }
  };

  const std::size_t max_n = std::max<std::size_t>(2, options.max_n);
  for (std::size_t c = 0; c < options.cases; ++c) {
    const std::size_t fam = c % kFamilies.size();
    const Model model = random_model(kFamilies[fam], rng);
    const std::size_t n = uniform_int(rng, 2, max_n);
    const Sample sample = random_sample(n, rng);
    ++report.cases;
    ++report.families[fam].cases;
    for (std::size_t p = 1; p < n; ++p) {
      if (binomial(n, p) > options.max_subsets) continue;
      const double closed = lpo_risk_closed(model, sample, p).value;
      const double brute = lpo_risk_brute(model, sample, p, options.max_subsets).value;
      record(fam, {"closed-vs-brute", model.name(), n, p, brute, closed});
      if (model.family() == Family::Histogram) {
        record(fam, {"hist-fast", model.name(), n, p, closed, lpo_risk_hist_fast(model.param(), sample, p).value});
      } else if (model.family() == Family::HaarScaling) {
        record(fam, {"haar-fast", model.name(), n, p, closed,
                     lpo_risk_haar_fast(static_cast<unsigned>(model.param()), sample, p).value});
      }
    }
  }
  return report;
}

}  // namespace lpocv
