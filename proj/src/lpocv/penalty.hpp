#pragma once

#include <cstddef>

#include "lpocv/bases.hpp"
#include "lpocv/estimator.hpp"
#include "lpocv/moments.hpp"

namespace lpocv {

/// R_p(m) = P_n gamma(s_hat_m) + pen_p(m).
struct PenaltyDecomposition {
  double empirical_risk = 0.0;
  double lpo_penalty = 0.0;
  double lpo_risk = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;
};

/// Both terms come from the same sufficient statistics; the penalty is defined as the difference.
PenaltyDecomposition lpo_penalty(const Model& model, const Sample& sample, std::size_t p);

/// E[idpen] = (2/n) sum Var phi_l(X).
double expected_ideal_penalty(const BasisMoments& m, std::size_t n);

/// E[pen_p] = (2n-p)/(n(n-p)) sum Var phi_l(X).
double expected_lpo_penalty(const BasisMoments& m, std::size_t n, std::size_t p);

/// C_over(p) = (2n-p)/(2n-2p).
double overpen_factor(std::size_t n, std::size_t p);

/// C_over evaluated at a real-valued p in [1, n).
double overpen_factor_real(double n, double p);

struct LogFactorChoice {
  double p_star = 0.0;        // (1 - 1/(2 log n - 1)) n, before rounding
  std::size_t p = 0;          // nearest integer (ties to even), clamped to [1, n-1]
  double factor = 0.0;        // C_over at the rounded p
  double target = 0.0;        // log n
};

/// The p whose overpenalization factor equals log n.
LogFactorChoice p_for_log_factor(std::size_t n);

/// Ideal penalty of a fitted estimate, P gamma(s_hat) - P_n gamma(s_hat), with
/// P gamma(s_hat) = ||s_hat||^2 - 2 sum_l a_l P phi_l. Requires the true moments.
double ideal_penalty(const ProjectionEstimate& estimate, const Sample& sample, const BasisMoments& truth);

}  // namespace lpocv
