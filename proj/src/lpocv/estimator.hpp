#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpocv/bases.hpp"

namespace lpocv {

/// Observations on [0,1], validated once at construction and never mutated.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// s_hat_m = sum_lambda a_lambda phi_lambda with a_lambda = P_n phi_lambda.
class ProjectionEstimate {
 public:
  ProjectionEstimate(Model model, std::vector<double> coeffs);

  const Model& model() const noexcept { return model_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  double operator()(double x) const;
  /// ||s_hat_m||^2 = sum a_lambda^2 (orthonormality).
  double squared_norm() const noexcept;

 private:
  Model model_;
  std::vector<double> coeffs_;
};

ProjectionEstimate fit_projection(const Model& model, const Sample& sample);

/// Fit on a subset of the observations (training indices).
ProjectionEstimate fit_projection(const Model& model, const Sample& sample, std::span<const std::size_t> indices);

double eval_density(const ProjectionEstimate& estimate, double x);

/// P_n gamma(s_hat) = ||s_hat||^2 - (2/n) sum_i s_hat(X_i), evaluated directly.
double empirical_contrast(const ProjectionEstimate& estimate, const Sample& sample);

/// Contrast averaged over a subset of observations (the test set of a split).
double empirical_contrast(const ProjectionEstimate& estimate, const Sample& sample, std::span<const std::size_t> indices);

}  // namespace lpocv
