#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lpocv/bases.hpp"
#include "lpocv/estimator.hpp"

namespace lpocv {

enum class CollectionKind {
  Pc,      // regular histograms D = 1..N_n
  Pp,      // dyadic piecewise polynomials, depths 0..J_n
  Tp,      // trigonometric polynomials, K = 0..J_n
  Custom,  // user-supplied list of models
};

const char* collection_kind_name(CollectionKind k) noexcept;

struct CollectionParams {
  double phi = 1.0;                     // Phi in the regularity bound Phi n / (log n)^2
  unsigned degree_bound = 1;            // r for (Pp)
  std::optional<std::size_t> max_dim;   // caps N_n below the regularity bound
};

struct Collection {
  CollectionKind kind = CollectionKind::Custom;
  std::vector<Model> models;
  std::size_t max_dim = 0;  // N_n
  CollectionParams params;
  std::size_t levels = 0;   // J_n for (Pp) and (Tp)
};

/// Phi n / (log n)^2 with the natural logarithm.
double regularity_bound(std::size_t n, double phi);

Collection build_collection(CollectionKind kind, std::size_t n, const CollectionParams& params);

/// Wraps an explicit list of models. Ordering is preserved.
Collection make_collection(std::vector<Model> models, double phi = 1.0);

enum class AdStatus { VerifiedSufficientCondition, Unknown };

struct AssumptionReport {
  bool reg_ok = false;
  bool reg2_ok = false;
  bool reg3_ok = false;
  bool pol_ok = false;
  double phi = 1.0;
  double reg_bound = 0.0;          // Phi n / (log n)^2
  double max_phi_sup = 0.0;        // max_m ||phi_m||_inf
  double max_coefficient_sup = 0.0;
  double max_reg3_ratio = 0.0;     // max_m ||phi_m||_inf / D_m
  double pol_delta = 0.0;          // witness delta
  std::size_t max_models_per_dim = 0;
  AdStatus ad = AdStatus::Unknown;
  double density_lower_bound = 0.0;  // rho when the sufficient condition is certified
};

/// `density_min` is the known infimum of s on [0,1] in simulation mode; absent otherwise.
AssumptionReport check_assumptions(const Collection& collection, std::size_t n,
                                   std::optional<double> density_min = std::nullopt);

/// zeta(eps) = 1 - (1+eps)^-8.
double zeta_of(double eps);

/// The inequality 4 zeta/(1+3 zeta) + 2/n < 1 - 2/(zeta(n-1)-2) < 1 together with zeta > 2/(n-1).
bool epsilon_valid(std::size_t n, double eps);

struct EpsilonSolution {
  double epsilon = 0.0;
  double zeta = 0.0;
  double delta = 0.0;
  double delta_lo = 0.0;
  double delta_hi = 0.0;
};

/// An epsilon in (0,1) satisfying epsilon_valid, from the midpoint of the admissible
/// interval of delta = zeta - 2/(n-1); empty when none exists.
std::optional<EpsilonSolution> solve_epsilon(std::size_t n);

struct PRange {
  double epsilon = 0.0;
  double zeta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double lower = 0.0;  // bound on p/n including alpha
  double upper = 0.0;  // bound on p/n including beta
  std::size_t p_lo = 0;
  std::size_t p_hi = 0;
  bool empty = true;
  /// Midpoint of [p_lo, p_hi]; only meaningful when nonempty.
  std::size_t midpoint() const noexcept { return (p_lo + p_hi) / 2; }
};

PRange admissible_p_range(std::size_t n, double epsilon, double alpha, double beta);

struct RiskPoint {
  std::size_t model_index = 0;
  std::string model;
  std::size_t dim = 0;
  double risk = 0.0;
};

struct SelectionResult {
  std::size_t chosen = 0;  // index into the collection / curve
  std::vector<RiskPoint> curve;
  std::size_t tied = 1;    // number of models attaining the minimum
  std::size_t p = 0;
  std::size_t n = 0;

  const RiskPoint& best() const { return curve.at(chosen); }
};

/// Closed-form leave-p-out risk for every model; models are evaluated in parallel
/// (threads = 0 means hardware concurrency) and results keep collection order.
std::vector<RiskPoint> risk_curve(const Collection& collection, const Sample& sample, std::size_t p,
                                  unsigned threads = 1);

/// argmin of the risk curve; ties go to the smallest dimension, then to collection order.
SelectionResult select_model(const Collection& collection, const Sample& sample, std::size_t p, unsigned threads = 1);

/// Thread count from LPOCV_THREADS or hardware concurrency.
unsigned default_thread_count();

}  // namespace lpocv
