#include "lpocv/penalty.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <string>

#include "lpocv/errors.hpp"
#include "lpocv/kahan.hpp"
#include "lpocv/lpo.hpp"

namespace lpocv {

PenaltyDecomposition lpo_penalty(const Model& model, const Sample& sample, std::size_t p) {
  check_p(sample.size(), p);
  const SufficientStats stats = sufficient_stats(model, sample);
  const double nd = static_cast<double>(stats.n);
  // P_n gamma(s_hat) = -sum a_l^2 with a_l = S_l / n.
  KahanSum norm2;
  for (double s : stats.sums) norm2 += (s / nd) * (s / nd);
  PenaltyDecomposition out;
  out.n = stats.n;
  out.p = p;
  out.empirical_risk = -norm2.value();
  // pen_p is R_p - P_n gamma; the risk is then re-assembled from the two stored terms so the
  // decomposition holds bit-for-bit (it differs from the closed form by at most rounding).
  out.lpo_penalty = lpo_risk_from_stats(stats, p) - out.empirical_risk;
  out.lpo_risk = out.empirical_risk + out.lpo_penalty;
  return out;
}

double expected_ideal_penalty(const BasisMoments& m, std::size_t n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be positive");
  return 2.0 / static_cast<double>(n) * m.variance_sum();
}

double expected_lpo_penalty(const BasisMoments& m, std::size_t n, std::size_t p) {
  check_p(n, p);
  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  return (2.0 * nd - pd) / (nd * (nd - pd)) * m.variance_sum();
}

double overpen_factor(std::size_t n, std::size_t p) {
  check_p(n, p);
  return overpen_factor_real(static_cast<double>(n), static_cast<double>(p));
}

double overpen_factor_real(double n, double p) { return (2.0 * n - p) / (2.0 * n - 2.0 * p); }

LogFactorChoice p_for_log_factor(std::size_t n) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "p_for_log_factor needs n >= 3");
  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);
  LogFactorChoice out;
  out.target = log_n;
  out.p_star = (1.0 - 1.0 / (2.0 * log_n - 1.0)) * nd;
  const int old_mode = std::fegetround();
  std::fesetround(FE_TONEAREST);
  double rounded = std::nearbyint(out.p_star);
  std::fesetround(old_mode);
  rounded = std::clamp(rounded, 1.0, nd - 1.0);
  out.p = static_cast<std::size_t>(rounded);
  out.factor = overpen_factor(n, out.p);
  return out;
}

double ideal_penalty(const ProjectionEstimate& estimate, const Sample& sample, const BasisMoments& truth) {
  const auto a = estimate.coeffs();
  if (a.size() != truth.dim()) fail(ErrorCode::InvalidArgument, "moments do not match the estimate's model");
  KahanSum cross;
  for (std::size_t l = 0; l < a.size(); ++l) cross += a[l] * truth.mean[l];
  const double true_contrast = estimate.squared_norm() - 2.0 * cross.value();
  return true_contrast - empirical_contrast(estimate, sample);
}

}  // namespace lpocv
