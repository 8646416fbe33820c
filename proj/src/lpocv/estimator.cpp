#include "lpocv/estimator.hpp"

#include <cmath>
#include <string>

#include "lpocv/errors.hpp"
#include "lpocv/kahan.hpp"

namespace lpocv {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) fail(ErrorCode::EmptySample, "sample is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      fail(ErrorCode::OutOfRange, "observation " + std::to_string(i + 1) + " outside [0,1]: " + std::to_string(v));
    }
  }
}

ProjectionEstimate::ProjectionEstimate(Model model, std::vector<double> coeffs)
    : model_(std::move(model)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != model_.dim()) fail(ErrorCode::InvalidArgument, "coefficient count does not match model dimension");
}

double ProjectionEstimate::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::OutOfRange, "evaluation point outside [0,1]: " + std::to_string(x));
  KahanSum sum;
  model_.for_each_nonzero(x, [&](std::size_t i, double v) { sum += coeffs_[i] * v; });
  return sum.value();
}

double ProjectionEstimate::squared_norm() const noexcept {
  KahanSum sum;
  for (double a : coeffs_) sum += a * a;
  return sum.value();
}

namespace {

template <class IndexRange>
ProjectionEstimate fit_over(const Model& model, const Sample& sample, const IndexRange& indices, std::size_t count) {
  if (count == 0) fail(ErrorCode::EmptySample, "cannot fit on an empty training set");
  std::vector<KahanSum> sums(model.dim());
  for (std::size_t i : indices) {
    model.for_each_nonzero(sample[i], [&](std::size_t idx, double v) { sums[idx] += v; });
  }
  std::vector<double> coeffs(model.dim());
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t l = 0; l < coeffs.size(); ++l) coeffs[l] = sums[l].value() * inv;
  return ProjectionEstimate(model, std::move(coeffs));
}

struct AllIndices {
  std::size_t n;
  struct It {
    std::size_t i;
    std::size_t operator*() const { return i; }
    It& operator++() {
      ++i;
      return *this;
    }
    bool operator!=(const It& o) const { return i != o.i; }
  };
  It begin() const { return {0}; }
  It end() const { return {n}; }
};

}  // namespace

ProjectionEstimate fit_projection(const Model& model, const Sample& sample) {
  return fit_over(model, sample, AllIndices{sample.size()}, sample.size());
}

ProjectionEstimate fit_projection(const Model& model, const Sample& sample, std::span<const std::size_t> indices) {
  for (std::size_t i : indices) {
    if (i >= sample.size()) fail(ErrorCode::OutOfRange, "training index out of range");
  }
  return fit_over(model, sample, indices, indices.size());
}

double eval_density(const ProjectionEstimate& estimate, double x) { return estimate(x); }

double empirical_contrast(const ProjectionEstimate& estimate, const Sample& sample) {
  KahanSum at_points;
  for (double x : sample.values()) at_points += estimate(x);
  return estimate.squared_norm() - 2.0 * at_points.value() / static_cast<double>(sample.size());
}

double empirical_contrast(const ProjectionEstimate& estimate, const Sample& sample, std::span<const std::size_t> indices) {
  if (indices.empty()) fail(ErrorCode::InvalidArgument, "empty test set");
  KahanSum at_points;
  for (std::size_t i : indices) {
    if (i >= sample.size()) fail(ErrorCode::OutOfRange, "test index out of range");
    at_points += estimate(sample[i]);
  }
  return estimate.squared_norm() - 2.0 * at_points.value() / static_cast<double>(indices.size());
}

}  // namespace lpocv
