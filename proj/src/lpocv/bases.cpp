#include "lpocv/bases.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpocv/errors.hpp"

namespace lpocv {

namespace {

constexpr unsigned kMaxLevel = 30;
constexpr unsigned kMaxDegreeBound = 64;

}  // namespace

const char* family_name(Family f) noexcept {
  switch (f) {
    case Family::Histogram: return "histogram";
    case Family::Trigonometric: return "trigonometric";
    case Family::HaarScaling: return "haar_scaling";
    case Family::HaarWavelet: return "haar_wavelet";
    case Family::PiecewisePolynomial: return "piecewise_polynomial";
  }
  return "unknown";
}

std::string BasisIndex::label(Family family) const {
  switch (family) {
    case Family::Histogram:
      return "bin " + std::to_string(offset);
    case Family::Trigonometric:
      if (parity == Parity::None) return "const";
      return std::string(parity == Parity::Sine ? "sin" : "cos") + " k=" + std::to_string(offset);
    case Family::HaarScaling:
    case Family::HaarWavelet:
      if (level < 0) return "father";
      return "(j=" + std::to_string(level) + ",k=" + std::to_string(offset) + ")";
    case Family::PiecewisePolynomial:
      return "cell " + std::to_string(offset) + " deg " + std::to_string(level);
  }
  return {};
}

Model::Model(Family family, std::size_t param, unsigned degree_bound)
    : family_(family), param_(param), degree_bound_(degree_bound) {
  switch (family_) {
    case Family::Histogram:
      for (std::size_t b = 0; b < param_; ++b) index_.push_back({b, 0, b, Parity::None});
      break;
    case Family::Trigonometric:
      index_.push_back({0, 0, 0, Parity::None});
      for (std::size_t k = 1; k <= param_; ++k) {
        index_.push_back({2 * k - 1, 0, k, Parity::Sine});
        index_.push_back({2 * k, 0, k, Parity::Cosine});
      }
      break;
    case Family::HaarScaling: {
      const std::size_t cells = std::size_t{1} << param_;
      for (std::size_t k = 0; k < cells; ++k) index_.push_back({k, static_cast<int>(param_), k, Parity::None});
      break;
    }
    case Family::HaarWavelet: {
      index_.push_back({0, -1, 0, Parity::None});
      for (std::size_t j = 0; j <= param_; ++j) {
        for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) {
          index_.push_back({index_.size(), static_cast<int>(j), k, Parity::None});
        }
      }
      break;
    }
    case Family::PiecewisePolynomial: {
      const std::size_t cells = std::size_t{1} << param_;
      for (std::size_t k = 0; k < cells; ++k) {
        for (unsigned d = 0; d < degree_bound_; ++d) {
          index_.push_back({index_.size(), static_cast<int>(d), k, Parity::None});
        }
      }
      break;
    }
  }
  dim_ = index_.size();
}

Model Model::histogram(std::size_t bins) {
  if (bins == 0) fail(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  if (bins > (std::size_t{1} << 26)) fail(ErrorCode::InvalidArgument, "histogram bin count too large");
  return Model(Family::Histogram, bins, 1);
}

Model Model::trigonometric(std::size_t cutoff) {
  if (cutoff > (std::size_t{1} << 24)) fail(ErrorCode::InvalidArgument, "trigonometric cutoff too large");
  return Model(Family::Trigonometric, cutoff, 1);
}

Model Model::haar_scaling(unsigned level) {
  if (level > kMaxLevel) fail(ErrorCode::InvalidArgument, "Haar level too large");
  return Model(Family::HaarScaling, level, 1);
}

Model Model::haar_wavelet(unsigned max_level) {
  if (max_level > kMaxLevel - 4) fail(ErrorCode::InvalidArgument, "Haar wavelet level too large");
  return Model(Family::HaarWavelet, max_level, 1);
}

Model Model::piecewise_polynomial(unsigned depth, unsigned degree_bound) {
  if (degree_bound == 0) fail(ErrorCode::InvalidArgument, "piecewise polynomial degree bound r must be >= 1");
  if (degree_bound > kMaxDegreeBound) fail(ErrorCode::InvalidArgument, "piecewise polynomial degree bound too large");
  if (depth > kMaxLevel - 6) fail(ErrorCode::InvalidArgument, "piecewise polynomial depth too large");
  return Model(Family::PiecewisePolynomial, depth, degree_bound);
}

double Model::eval(std::size_t position, double x) const {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::OutOfRange, "evaluation point outside [0,1]: " + std::to_string(x));
  if (position >= dim_) {
    fail(ErrorCode::OutOfRange, "basis index " + std::to_string(position) + " not in model " + name());
  }
  if (family_ == Family::Trigonometric && position > 0) {
    const std::size_t k = (position + 1) / 2;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) * x;
    return std::numbers::sqrt2 * (position % 2 == 1 ? std::sin(angle) : std::cos(angle));
  }
  double result = 0.0;
  for_each_nonzero(x, [&](std::size_t i, double v) {
    if (i == position) result = v;
  });
  return result;
}

void Model::eval_all(double x, std::span<double> out) const {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::OutOfRange, "evaluation point outside [0,1]: " + std::to_string(x));
  if (out.size() != dim_) fail(ErrorCode::InvalidArgument, "output span does not match model dimension");
  std::fill(out.begin(), out.end(), 0.0);
  for_each_nonzero(x, [&](std::size_t i, double v) { out[i] = v; });
}

double Model::phi_sup() const noexcept {
  const double d = static_cast<double>(dim_);
  switch (family_) {
    case Family::Histogram:
    case Family::HaarScaling:
    case Family::Trigonometric:
    case Family::HaarWavelet:
      return d;
    case Family::PiecewisePolynomial:
      // sum_{d<r} (2d+1) P_d(+-1)^2 = r^2 per unit cell, at the cell edges.
      return static_cast<double>(degree_bound_) * d;
  }
  return d;
}

double Model::coefficient_sup_bound() const noexcept {
  switch (family_) {
    case Family::Histogram:
    case Family::HaarScaling:
      return std::sqrt(static_cast<double>(dim_));
    case Family::Trigonometric:
      return std::numbers::sqrt2 * static_cast<double>(dim_);
    case Family::HaarWavelet: {
      double total = 1.0;
      for (std::size_t j = 0; j <= param_; ++j) total += std::sqrt(static_cast<double>(std::size_t{1} << j));
      return total;
    }
    case Family::PiecewisePolynomial: {
      double total = 0.0;
      for (unsigned d = 0; d < degree_bound_; ++d) total += std::sqrt(2.0 * d + 1.0);
      return total * std::sqrt(static_cast<double>(std::size_t{1} << param_));
    }
  }
  return 0.0;
}

std::string Model::name() const {
  switch (family_) {
    case Family::Histogram: return "histogram(D=" + std::to_string(param_) + ")";
    case Family::Trigonometric: return "trigonometric(K=" + std::to_string(param_) + ")";
    case Family::HaarScaling: return "haar_scaling(j=" + std::to_string(param_) + ")";
    case Family::HaarWavelet: return "haar_wavelet(J=" + std::to_string(param_) + ")";
    case Family::PiecewisePolynomial:
      return "piecewise_polynomial(depth=" + std::to_string(param_) + ",r=" + std::to_string(degree_bound_) + ")";
  }
  return "unknown";
}

std::vector<double> Model::breaks() const {
  std::size_t cells = 1;
  switch (family_) {
    case Family::Histogram:
    case Family::HaarScaling: cells = dim_; break;
    case Family::Trigonometric: cells = 1; break;
    case Family::HaarWavelet: cells = std::size_t{1} << (param_ + 1); break;
    case Family::PiecewisePolynomial: cells = std::size_t{1} << param_; break;
  }
  std::vector<double> out(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) out[i] = static_cast<double>(i) / static_cast<double>(cells);
  return out;
}

std::vector<double> merge_breaks(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> gram_matrix(const Model& model, std::size_t intervals) {
  const std::size_t d = model.dim();
  std::vector<double> gram(d * d, 0.0);
  const auto br = model.breaks();
  std::vector<std::size_t> nz;
  std::vector<double> nzv;
  for_each_reference_node(
      br,
      [&](double x, double w) {
        nz.clear();
        nzv.clear();
        model.for_each_nonzero(x, [&](std::size_t idx, double v) {
          nz.push_back(idx);
          nzv.push_back(v);
        });
        for (std::size_t u = 0; u < nz.size(); ++u) {
          for (std::size_t t = 0; t < nz.size(); ++t) gram[nz[u] * d + nz[t]] += nzv[u] * nzv[t] * w;
        }
      },
      intervals);
  return gram;
}

}  // namespace lpocv
