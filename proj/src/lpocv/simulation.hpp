#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpocv/bases.hpp"
#include "lpocv/estimator.hpp"
#include "lpocv/moments.hpp"
#include "lpocv/selection.hpp"

namespace lpocv {

enum class DensityKind { PiecewiseConstant, HolderCusp, TrigSmooth };

const char* density_kind_name(DensityKind k) noexcept;

/// A known density on [0,1].
///  - PiecewiseConstant: heights[k] on [breaks[k], breaks[k+1]).
///  - HolderCusp: s(x) = c (1 + L |x - 1/2|^alpha), c normalising.
///  - TrigSmooth: s(x) = 1 + sum_k sqrt2 (a_k cos(2 pi k x) + b_k sin(2 pi k x)), k >= 1.
class DensitySpec {
 public:
  static DensitySpec uniform();
  static DensitySpec piecewise_constant(std::vector<double> heights, std::vector<double> breaks);
  static DensitySpec holder_cusp(double L, double alpha);
  static DensitySpec trig_smooth(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  DensityKind kind() const noexcept { return kind_; }
  double pdf(double x) const;
  double cdf(double x) const;
  /// Inverse CDF; closed form for piecewise-constant, safeguarded Newton/bisection to 1e-12 otherwise.
  double quantile(double u) const;

  /// Discontinuities and kinks, 0 and 1 included.
  std::vector<double> breaks() const;
  /// A lower bound on inf s over [0,1] (exact except for TrigSmooth).
  double lower_bound() const;
  /// ||s||^2.
  double squared_norm() const;

  const std::vector<double>& heights() const noexcept { return heights_; }
  const std::vector<double>& piece_breaks() const noexcept { return breaks_; }
  double L() const noexcept { return L_; }
  double alpha() const noexcept { return alpha_; }
  /// Normalising constant c of the cusp family.
  double cusp_constant() const noexcept { return c_; }
  /// Holder constant of the cusp density, c L: s is in H(cL, alpha).
  double holder_constant() const noexcept { return c_ * L_; }
  const std::vector<double>& cos_coeffs() const noexcept { return cos_; }
  const std::vector<double>& sin_coeffs() const noexcept { return sin_; }

 private:
  DensityKind kind_ = DensityKind::PiecewiseConstant;
  std::vector<double> heights_;
  std::vector<double> breaks_;
  double L_ = 0.0;
  double alpha_ = 1.0;
  double c_ = 1.0;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Deterministic seed for one generator stream, mixed from (seed, stream indices).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// n draws by inverse-CDF sampling from a std::mt19937_64 seeded with `seed`.
Sample sample_density(const DensitySpec& spec, std::size_t n, std::uint64_t seed);

/// Analytic for piecewise-constant densities with indicator-partition models, quadrature otherwise.
BasisMoments density_moments(const DensitySpec& spec, const Model& model);

/// ||s - s_m||^2 by the reference quadrature.
double projection_bias(const DensitySpec& spec, const Model& model, const BasisMoments& moments);
double projection_bias(const DensitySpec& spec, const Model& model);

/// E||s - s_hat_m||^2 = ||s - s_m||^2 + sum_l Var phi_l(X) / n.
double true_risk(const DensitySpec& spec, const Model& model, std::size_t n);

/// How p is chosen at each n.
struct PRule {
  enum class Kind { Fixed, Fraction, Auto };
  Kind kind = Kind::Fraction;
  double value = 0.5;  // p for Fixed, p/n for Fraction

  static PRule fixed(std::size_t p) { return {Kind::Fixed, static_cast<double>(p)}; }
  static PRule fraction(double f) { return {Kind::Fraction, f}; }
  static PRule automatic() { return {Kind::Auto, 0.0}; }

  /// Throws Infeasible when Auto has no admissible p at this n.
  std::size_t resolve(std::size_t n) const;
};

struct ExperimentConfig {
  DensitySpec density = DensitySpec::uniform();
  CollectionKind collection = CollectionKind::Pc;
  CollectionParams collection_params;
  PRule p_rule;
  std::vector<std::size_t> n_grid;
  std::size_t replications = 200;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Oracle-ratio only: also run p = 1 on the same samples.
  bool compare_loo = true;
};

struct RatioRow {
  std::size_t n = 0;
  std::size_t p = 0;
  double mean_risk = 0.0;     // mean over replications of ||s - s_hat_mhat||^2
  double stderr_risk = 0.0;
  double oracle_risk = 0.0;   // min_m true_risk
  std::size_t oracle_dim = 0;
  std::string oracle_model;
  double ratio = 0.0;         // mean_risk / oracle_risk (1 when both vanish, +inf when only the oracle does)
  double ci_low = 0.0;        // ratio bounds from mean_risk -+ 1.96 stderr
  double ci_high = 0.0;
  double mean_dim = 0.0;      // average selected dimension
  std::optional<double> loo_mean_risk;
  std::optional<double> loo_ratio;
};

struct RatioReport {
  std::vector<RatioRow> rows;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
};

RatioReport oracle_ratio_experiment(const ExperimentConfig& config);

struct SlopeRow {
  std::size_t n = 0;
  std::size_t p = 0;
  double mean_risk = 0.0;
  double stderr_risk = 0.0;
  double oracle_risk = 0.0;
  double mean_dim = 0.0;
};

struct SlopeReport {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  std::vector<SlopeRow> rows;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
};

/// Least-squares slope of log(mean risk of s_hat_mhat) against log n.
/// Throws InvalidArgument unless the grid is strictly increasing and spans at least a decade.
SlopeReport adaptivity_slope_experiment(const ExperimentConfig& config);

/// Upper bound C_alpha L'^2 D^{-2 alpha} on ||s - s_m||^2 for s in H(L', alpha) and a regular
/// histogram with D bins, C_alpha = 4(alpha+2)/((1+alpha)^2 (2 alpha + 3)).
double holder_histogram_bias_bound(double holder_constant, double alpha, std::size_t bins);

}  // namespace lpocv
