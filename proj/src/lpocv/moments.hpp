#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lpocv/bases.hpp"

namespace lpocv {

/// Moments of the basis functions under a known density s, X ~ s.
struct BasisMoments {
  std::vector<double> mean;         // P phi_l
  std::vector<double> second;       // P(phi_l phi_m), D x D row-major; diagonal is P phi_l^2
  std::vector<double> third;        // P phi_l^3
  std::vector<double> phi_m_cross;  // P(phi_m phi_l) with phi_m = sum_k phi_k^2
  double phi_m_second = 0.0;        // E phi_m(X)^2

  std::size_t dim() const noexcept { return mean.size(); }
  double second_at(std::size_t l, std::size_t m) const noexcept { return second[l * dim() + m]; }
  /// V_m = E phi_m(X) = sum_l P phi_l^2.
  double v_m() const noexcept;
  /// ||s_m||^2 = sum_l (P phi_l)^2.
  double projection_norm2() const noexcept;
  /// sum_l Var phi_l(X).
  double variance_sum() const noexcept;
  /// E (sum_l phi_l(X) P phi_l)^2.
  double projection_square() const noexcept;
};

/// Moments by the reference quadrature against a density; `breaks` lists the density's
/// discontinuities (0 and 1 included) and is merged with the model's own.
BasisMoments basis_moments_quadrature(const Model& model, const std::function<double(double)>& density,
                                      std::span<const double> density_breaks);

/// Exact moments for an indicator partition (histogram or single-level Haar) from cell probabilities.
BasisMoments basis_moments_partition(const Model& model, std::span<const double> cell_probs);

struct MomentReport {
  double mean = 0.0;
  double variance = 0.0;
  double bias = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;
};

/// E R_p = (1/(n-p)) sum Var phi_l - sum (P phi_l)^2.
double lpo_expectation(const BasisMoments& m, std::size_t n, std::size_t p);

/// Exact Var R_p. Derived from n(n-1)(n-p) R_p = (n-1) sum_i phi_m(X_i) - (n-p+1) sum_{i!=j} h(X_i, X_j)
/// with h(x,y) = sum_l phi_l(x) phi_l(y), via the usual U-statistic variance decomposition.
/// Tiny negatives from cancellation are clamped to 0.
double lpo_variance(const BasisMoments& m, std::size_t n, std::size_t p);

/// B = E R_p - r_n = p/(n(n-p)) sum Var phi_l.
double lpo_bias(const BasisMoments& m, std::size_t n, std::size_t p);

/// r_n(m) = E[||s_hat||^2 - 2 int s s_hat] = (1/n) sum Var - sum (P phi)^2.
double expected_contrast_risk(const BasisMoments& m, std::size_t n);

MomentReport moment_report(const BasisMoments& m, std::size_t n, std::size_t p);

/// Histogram variance as the quadratic p^2 q2 + p q1 + q0 over [n(n-1)(n-p)]^2,
/// with alpha_l = P(X in I_l) and omega_l = |I_l|.
double hist_variance_poly(std::span<const double> alphas, std::span<const double> widths, std::size_t n, std::size_t p);

/// The three coefficients (q2, q1, q0) of the above.
struct HistPoly {
  double q2 = 0.0;
  double q1 = 0.0;
  double q0 = 0.0;
};
HistPoly hist_variance_coefficients(std::span<const double> alphas, std::span<const double> widths, std::size_t n);

/// Histogram expectation sum_l alpha_l(1-alpha_l)/((n-p) omega_l) - sum_l alpha_l^2/omega_l.
double hist_expectation(std::span<const double> alphas, std::span<const double> widths, std::size_t n, std::size_t p);

/// Piecewise-constant density: probability mass per piece [breaks[k], breaks[k+1]).
struct DiscreteDensity {
  std::vector<double> breaks;
  std::vector<double> probs;
};

struct ExactMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact mean and variance of R_p by enumerating every allocation of the n observations
/// to the density pieces, weighting by the multinomial probability and evaluating R_p by
/// exhaustive resampling. Every basis function must be constant on each piece.
/// Limits: at most 4 pieces and n <= 8.
ExactMoments exact_moments_oracle(const Model& model, const DiscreteDensity& density, std::size_t n, std::size_t p);

}  // namespace lpocv
