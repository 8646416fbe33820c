#include "lpocv/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpocv/errors.hpp"
#include "lpocv/estimator.hpp"
#include "lpocv/kahan.hpp"
#include "lpocv/lpo.hpp"

namespace lpocv {

double BasisMoments::v_m() const noexcept {
  KahanSum s;
  for (std::size_t l = 0; l < dim(); ++l) s += second_at(l, l);
  return s.value();
}

double BasisMoments::projection_norm2() const noexcept {
  KahanSum s;
  for (double m : mean) s += m * m;
  return s.value();
}

double BasisMoments::variance_sum() const noexcept {
  KahanSum s;
  // Each term is a variance; quadrature can leave it a few ulps below zero.
  for (std::size_t l = 0; l < dim(); ++l) s += std::max(0.0, second_at(l, l) - mean[l] * mean[l]);
  return s.value();
}

double BasisMoments::projection_square() const noexcept {
  KahanSum s;
  const std::size_t d = dim();
  for (std::size_t l = 0; l < d; ++l) {
    if (mean[l] == 0.0) continue;
    for (std::size_t m = 0; m < d; ++m) s += mean[l] * mean[m] * second[l * d + m];
  }
  return s.value();
}

BasisMoments basis_moments_quadrature(const Model& model, const std::function<double(double)>& density,
                                      std::span<const double> density_breaks) {
  const std::size_t d = model.dim();
  const auto model_breaks = model.breaks();
  const auto br = merge_breaks(model_breaks, density_breaks);
  std::vector<double> mean(d, 0.0), second(d * d, 0.0), third(d, 0.0), cross(d, 0.0);
  double phi_m2 = 0.0;
  std::vector<std::size_t> nz;
  std::vector<double> nzv;
  for_each_reference_node(br, [&](double x, double weight) {
    const double w = density(x) * weight;
    if (w == 0.0) return;
    nz.clear();
    nzv.clear();
    double phi_m = 0.0;
    model.for_each_nonzero(x, [&](std::size_t idx, double v) {
      nz.push_back(idx);
      nzv.push_back(v);
      phi_m += v * v;
    });
    for (std::size_t u = 0; u < nz.size(); ++u) {
      const double v = nzv[u];
      mean[nz[u]] += w * v;
      third[nz[u]] += w * v * v * v;
      cross[nz[u]] += w * phi_m * v;
      for (std::size_t t = 0; t < nz.size(); ++t) second[nz[u] * d + nz[t]] += w * v * nzv[t];
    }
    phi_m2 += w * phi_m * phi_m;
  });
  return {std::move(mean), std::move(second), std::move(third), std::move(cross), phi_m2};
}

BasisMoments basis_moments_partition(const Model& model, std::span<const double> cell_probs) {
  if (!model.is_indicator_partition()) {
    fail(ErrorCode::InvalidArgument, "analytic partition moments need a histogram or single-level Haar model");
  }
  const std::size_t d = model.dim();
  if (cell_probs.size() != d) fail(ErrorCode::InvalidArgument, "one probability per cell required");
  const double dd = static_cast<double>(d);
  const double amp = std::sqrt(dd);
  BasisMoments m;
  m.mean.resize(d);
  m.second.assign(d * d, 0.0);
  m.third.resize(d);
  m.phi_m_cross.resize(d);
  for (std::size_t l = 0; l < d; ++l) {
    const double a = cell_probs[l];
    m.mean[l] = a * amp;
    m.second[l * d + l] = a * dd;
    m.third[l] = a * dd * amp;
    m.phi_m_cross[l] = dd * a * amp;  // phi_m is identically D
  }
  double total = 0.0;
  for (double a : cell_probs) total += a;
  m.phi_m_second = dd * dd * total;
  return m;
}

namespace {

void check_moment_p(std::size_t n, std::size_t p) {
  if (n < 2 || p < 1 || p > n - 1) {
    fail(ErrorCode::InvalidP, "p must lie in [1, n-1]; got p=" + std::to_string(p) + " with n=" + std::to_string(n));
  }
}

}  // namespace

double lpo_expectation(const BasisMoments& m, std::size_t n, std::size_t p) {
  check_moment_p(n, p);
  return m.variance_sum() / static_cast<double>(n - p) - m.projection_norm2();
}

double lpo_variance(const BasisMoments& m, std::size_t n, std::size_t p) {
  check_moment_p(n, p);
  if (m.second.size() != m.dim() * m.dim() || m.third.size() != m.dim() || m.phi_m_cross.size() != m.dim()) {
    fail(ErrorCode::InvalidArgument, "basis moments are incomplete for the variance formula");
  }
  const double nd = static_cast<double>(n);
  const double a = nd - 1.0;
  const double b = nd - static_cast<double>(p) + 1.0;
  const std::size_t d = m.dim();

  // f = phi_m, h1(x) = E h(x, Y) = sum_l phi_l(x) P phi_l.
  const double ef = m.v_m();
  const double var_f = m.phi_m_second - ef * ef;
  const double eh = m.projection_norm2();
  const double zeta1 = m.projection_square() - eh * eh;
  KahanSum eh2;
  for (double v : m.second) eh2 += v * v;
  const double zeta2 = eh2.value() - eh * eh;
  KahanSum efh1;
  for (std::size_t l = 0; l < d; ++l) efh1 += m.phi_m_cross[l] * m.mean[l];
  const double cov_f_h1 = efh1.value() - ef * eh;

  const double pairs2 = 2.0 * nd * (nd - 1.0);  // 4 C(n,2)
  const double term_single = a * a * nd * var_f;
  const double term_pairs = b * b * pairs2 * (zeta2 + 2.0 * (nd - 2.0) * zeta1);
  const double term_cross = -2.0 * a * b * pairs2 * cov_f_h1;
  const double numerator = term_single + term_pairs + term_cross;
  const double scale = nd * (nd - 1.0) * (nd - static_cast<double>(p));
  double variance = numerator / (scale * scale);
  if (variance < 0.0) {
    const double dominant =
        std::max({std::abs(term_single), std::abs(term_pairs), std::abs(term_cross)}) / (scale * scale);
    if (-variance <= 1e-12 * std::max(1.0, dominant)) {
      variance = 0.0;
    } else {
      fail(ErrorCode::Internal, "variance formula produced a negative value; moments inconsistent");
    }
  }
  return variance;
}

double lpo_bias(const BasisMoments& m, std::size_t n, std::size_t p) {
  check_moment_p(n, p);
  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  return pd / (nd * (nd - pd)) * m.variance_sum();
}

double expected_contrast_risk(const BasisMoments& m, std::size_t n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be positive");
  return m.variance_sum() / static_cast<double>(n) - m.projection_norm2();
}

MomentReport moment_report(const BasisMoments& m, std::size_t n, std::size_t p) {
  return {lpo_expectation(m, n, p), lpo_variance(m, n, p), lpo_bias(m, n, p), n, p};
}

namespace {

void check_hist_inputs(std::span<const double> alphas, std::span<const double> widths) {
  if (alphas.empty() || alphas.size() != widths.size()) {
    fail(ErrorCode::InvalidArgument, "alphas and widths must be nonempty and of equal length");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (!(alphas[k] >= 0.0) || !(widths[k] > 0.0)) {
      fail(ErrorCode::InvalidArgument, "invalid probability vector: need alpha >= 0 and omega > 0");
    }
    total += alphas[k];
  }
  if (total > 1.0 + 1e-12) fail(ErrorCode::InvalidArgument, "invalid probability vector: sum of alphas exceeds 1");
}

double s_ij(std::span<const double> alphas, std::span<const double> widths, int i, int j) {
  KahanSum s;
  for (std::size_t k = 0; k < alphas.size(); ++k) s += std::pow(alphas[k], i) / std::pow(widths[k], j);
  return s.value();
}

}  // namespace

HistPoly hist_variance_coefficients(std::span<const double> alphas, std::span<const double> widths, std::size_t n) {
  check_hist_inputs(alphas, widths);
  const double nd = static_cast<double>(n);
  const double s11 = s_ij(alphas, widths, 1, 1);
  const double s12 = s_ij(alphas, widths, 1, 2);
  const double s21 = s_ij(alphas, widths, 2, 1);
  const double s22 = s_ij(alphas, widths, 2, 2);
  const double s32 = s_ij(alphas, widths, 3, 2);
  const double t1 = nd * (nd - 1.0);
  HistPoly q;
  q.q2 = t1 * (2.0 * s22 + 4.0 * s32 * (nd - 2.0) + s21 * s21 * (-4.0 * nd + 6.0));
  q.q1 = t1 * (-8.0 * s22 - 8.0 * s32 * (nd - 2.0) * (nd + 1.0) - 4.0 * s11 * s21 * (nd - 1.0) -
               2.0 * s21 * s21 * (-4.0 * nd * nd + 2.0 * nd + 6.0));
  q.q0 = t1 * (s12 * (nd - 1.0) - 2.0 * s22 * (nd * nd - 2.0 * nd - 3.0) + 4.0 * s32 * (nd - 2.0) * (nd + 1.0) * (nd + 1.0) -
               s11 * s11 * (nd - 1.0) + 4.0 * s11 * s21 * (nd * nd - 1.0) +
               s21 * s21 * (-4.0 * nd + 6.0) * (nd + 1.0) * (nd + 1.0));
  return q;
}

double hist_variance_poly(std::span<const double> alphas, std::span<const double> widths, std::size_t n, std::size_t p) {
  check_moment_p(n, p);
  const HistPoly q = hist_variance_coefficients(alphas, widths, n);
  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  const double scale = nd * (nd - 1.0) * (nd - pd);
  const double value = (pd * pd * q.q2 + pd * q.q1 + q.q0) / (scale * scale);
  const double dominant = (pd * pd * std::abs(q.q2) + pd * std::abs(q.q1) + std::abs(q.q0)) / (scale * scale);
  if (value < 0.0 && -value <= 1e-12 * std::max(1.0, dominant)) return 0.0;
  return value;
}

double hist_expectation(std::span<const double> alphas, std::span<const double> widths, std::size_t n, std::size_t p) {
  check_moment_p(n, p);
  check_hist_inputs(alphas, widths);
  KahanSum first, second;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    first += alphas[k] * (1.0 - alphas[k]) / widths[k];
    second += alphas[k] * alphas[k] / widths[k];
  }
  return first.value() / static_cast<double>(n - p) - second.value();
}

ExactMoments exact_moments_oracle(const Model& model, const DiscreteDensity& density, std::size_t n, std::size_t p) {
  const std::size_t pieces = density.probs.size();
  if (pieces == 0 || density.breaks.size() != pieces + 1) fail(ErrorCode::InvalidArgument, "malformed discrete density");
  if (pieces > 4 || n > 8) fail(ErrorCode::InvalidArgument, "configuration too large for exact enumeration (pieces <= 4, n <= 8)");
  check_moment_p(n, p);
  const bool piecewise_constant_basis = model.family() == Family::Histogram || model.family() == Family::HaarScaling ||
                                        model.family() == Family::HaarWavelet ||
                                        (model.family() == Family::PiecewisePolynomial && model.degree_bound() == 1);
  if (!piecewise_constant_basis) fail(ErrorCode::InvalidArgument, "exact enumeration needs a piecewise-constant basis");
  const auto model_breaks = model.breaks();
  for (std::size_t k = 0; k < pieces; ++k) {
    const double a = density.breaks[k];
    const double b = density.breaks[k + 1];
    if (!(a < b)) fail(ErrorCode::InvalidArgument, "density breaks must be increasing");
    for (double br : model_breaks) {
      if (br > a && br < b) fail(ErrorCode::InvalidArgument, "a basis function changes value inside a density piece");
    }
  }
  std::vector<double> reps(pieces);
  for (std::size_t k = 0; k < pieces; ++k) reps[k] = 0.5 * (density.breaks[k] + density.breaks[k + 1]);

  std::vector<double> log_fact(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));

  std::vector<double> weights, risks;
  std::vector<std::size_t> counts(pieces, 0);
  // Enumerate compositions of n into `pieces` nonnegative parts.
  auto visit = [&](auto&& self, std::size_t k, std::size_t remaining) -> void {
    if (k + 1 == pieces) {
      counts[k] = remaining;
      double weight_log = log_fact[n];
      for (std::size_t j = 0; j < pieces; ++j) {
        if (counts[j] == 0) continue;
        if (density.probs[j] <= 0.0) return;
        weight_log += static_cast<double>(counts[j]) * std::log(density.probs[j]) - log_fact[counts[j]];
      }
      const double weight = std::exp(weight_log);
      std::vector<double> values;
      values.reserve(n);
      for (std::size_t j = 0; j < pieces; ++j) values.insert(values.end(), counts[j], reps[j]);
      weights.push_back(weight);
      risks.push_back(lpo_risk_brute(model, Sample(std::move(values)), p).value);
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      counts[k] = c;
      self(self, k + 1, remaining - c);
    }
  };
  visit(visit, 0, n);
  KahanSum mean;
  for (std::size_t i = 0; i < risks.size(); ++i) mean += weights[i] * risks[i];
  const double mu = mean.value();
  KahanSum spread;
  for (std::size_t i = 0; i < risks.size(); ++i) spread += weights[i] * (risks[i] - mu) * (risks[i] - mu);
  return {mu, spread.value()};
}

}  // namespace lpocv
