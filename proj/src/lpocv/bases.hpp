#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace lpocv {

enum class Family {
  Histogram,            // regular partition into D bins
  Trigonometric,        // 1, sqrt2 sin(2 pi k x), sqrt2 cos(2 pi k x), k <= K
  HaarScaling,          // one level j of Haar scaling functions
  HaarWavelet,          // father function plus wavelets up to level J
  PiecewisePolynomial,  // shifted Legendre pieces of degree < r on 2^depth dyadic cells
};

const char* family_name(Family f) noexcept;

enum class Parity { None, Sine, Cosine };

/// Family-specific label of one basis function. `position` is its rank in the
/// model's index set and is what every evaluation routine takes.
struct BasisIndex {
  std::size_t position = 0;
  int level = 0;            // Haar level (father = -1); polynomial degree for piecewise polynomials
  std::size_t offset = 0;   // bin, cell, translation k, or trigonometric frequency
  Parity parity = Parity::None;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
  friend auto operator<=>(const BasisIndex& a, const BasisIndex& b) { return a.position <=> b.position; }
  std::string label(Family family) const;
};

/// An orthonormal family {phi_lambda} on [0,1] spanning a model S_m.
/// Immutable after construction.
class Model {
 public:
  static Model histogram(std::size_t bins);
  static Model trigonometric(std::size_t cutoff);
  static Model haar_scaling(unsigned level);
  static Model haar_wavelet(unsigned max_level);
  static Model piecewise_polynomial(unsigned depth, unsigned degree_bound);

  Family family() const noexcept { return family_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<BasisIndex>& index_set() const noexcept { return index_; }

  /// Family parameter: D, K, j, J or depth.
  std::size_t param() const noexcept { return param_; }
  /// Degree bound r for piecewise polynomials, 1 otherwise.
  unsigned degree_bound() const noexcept { return degree_bound_; }

  /// phi_lambda(x) with full argument checking.
  double eval(std::size_t position, double x) const;
  /// All basis values at x, in index order.
  void eval_all(double x, std::span<double> out) const;

  /// Calls f(position, value) for each basis function that may be nonzero at x.
  /// x must already be in [0,1].
  template <class F>
  void for_each_nonzero(double x, F&& f) const;

  /// Analytic sup over [0,1] of phi_m = sum_lambda phi_lambda^2.
  double phi_sup() const noexcept;
  /// Analytic bound on sup over |a|_inf = 1 of || sum_lambda a_lambda phi_lambda ||_inf.
  double coefficient_sup_bound() const noexcept;

  /// Histogram and single-level Haar: one indicator per cell.
  bool is_indicator_partition() const noexcept {
    return family_ == Family::Histogram || family_ == Family::HaarScaling;
  }
  /// Number of cells for indicator partitions.
  std::size_t cells() const noexcept { return is_indicator_partition() ? dim_ : 0; }

  std::string name() const;

  /// Points where some basis function may be discontinuous (or lose smoothness), including 0 and 1.
  std::vector<double> breaks() const;

  friend bool operator==(const Model& a, const Model& b) noexcept {
    return a.family_ == b.family_ && a.param_ == b.param_ && a.degree_bound_ == b.degree_bound_;
  }

 private:
  Model(Family family, std::size_t param, unsigned degree_bound);

  Family family_;
  std::size_t param_;
  unsigned degree_bound_;
  std::size_t dim_ = 0;
  std::vector<BasisIndex> index_;
};

/// Cell of x in a regular partition of [0,1] into `cells` right-open intervals; 1 goes to the last.
inline std::size_t cell_of(double x, std::size_t cells) noexcept {
  const auto c = static_cast<std::size_t>(x * static_cast<double>(cells));
  return c < cells ? c : cells - 1;
}

/// sqrt(2d+1) P_d(2u-1): Legendre polynomials orthonormal on [0,1].
/// Writes degrees 0..out.size()-1.
inline void shifted_legendre(double u, std::span<double> out) noexcept {
  const double t = 2.0 * u - 1.0;
  double p_prev = 1.0;
  double p = t;
  for (std::size_t d = 0; d < out.size(); ++d) {
    double value;
    if (d == 0) {
      value = 1.0;
    } else if (d == 1) {
      value = t;
    } else {
      const double k = static_cast<double>(d);
      const double next = ((2.0 * k - 1.0) * t * p - (k - 1.0) * p_prev) / k;
      p_prev = p;
      p = next;
      value = next;
    }
    out[d] = std::sqrt(2.0 * static_cast<double>(d) + 1.0) * value;
  }
}

template <class F>
void Model::for_each_nonzero(double x, F&& f) const {
  switch (family_) {
    case Family::Histogram:
    case Family::HaarScaling: {
      f(cell_of(x, dim_), std::sqrt(static_cast<double>(dim_)));
      return;
    }
    case Family::Trigonometric: {
      f(std::size_t{0}, 1.0);
      if (param_ == 0) return;
      const double angle = 2.0 * std::numbers::pi * x;
      const double c1 = std::cos(angle);
      const double s1 = std::sin(angle);
      double c = c1;
      double s = s1;
      for (std::size_t k = 1; k <= param_; ++k) {
        if (k > 1) {
          // Resynchronise periodically so the rotation recurrence cannot drift.
          if ((k & 31u) == 0) {
            c = std::cos(angle * static_cast<double>(k));
            s = std::sin(angle * static_cast<double>(k));
          } else {
            const double cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
          }
        }
        f(2 * k - 1, std::numbers::sqrt2 * s);
        f(2 * k, std::numbers::sqrt2 * c);
      }
      return;
    }
    case Family::HaarWavelet: {
      f(std::size_t{0}, 1.0);
      std::size_t base = 1;
      for (std::size_t j = 0; j <= param_; ++j) {
        const std::size_t width = std::size_t{1} << j;
        const std::size_t half_cells = width * 2;
        const std::size_t h = cell_of(x, half_cells);
        const double amp = std::sqrt(static_cast<double>(width));
        f(base + h / 2, (h % 2 == 0) ? amp : -amp);
        base += width;
      }
      return;
    }
    case Family::PiecewisePolynomial: {
      const std::size_t cells = std::size_t{1} << param_;
      const std::size_t k = cell_of(x, cells);
      const double u = x * static_cast<double>(cells) - static_cast<double>(k);
      double buf[64];
      std::span<double> vals(buf, degree_bound_);
      shifted_legendre(u, vals);
      const double scale = std::sqrt(static_cast<double>(cells));
      for (unsigned d = 0; d < degree_bound_; ++d) f(k * degree_bound_ + d, scale * vals[d]);
      return;
    }
  }
}

/// Reference quadrature: 2^17 nodes in total, distributed over the pieces delimited by
/// `breaks` so no node straddles a discontinuity. On each piece [a, a+w] the midpoint rule
/// runs in t after x = a + w g(t), g(t) = 10t^3 - 15t^4 + 6t^5. Since g' vanishes to second
/// order at both ends, kinks and |x - a|^alpha endpoint singularities (the cusp densities)
/// are integrated to O(h^(3 alpha + 3)) and smooth integrands to O(h^4).
inline constexpr std::size_t kReferenceQuadrature = std::size_t{1} << 17;

/// Calls node(x, weight) for every reference node; weights on a piece sum to its width.
template <class F>
void for_each_reference_node(std::span<const double> breaks, F&& node, std::size_t intervals = kReferenceQuadrature) {
  const std::size_t pieces = breaks.size() - 1;
  const std::size_t per_piece = std::max<std::size_t>(1, (intervals + pieces - 1) / pieces);
  const double h = 1.0 / static_cast<double>(per_piece);
  for (std::size_t p = 0; p < pieces; ++p) {
    const double a = breaks[p];
    const double width = breaks[p + 1] - a;
    if (width <= 0.0) continue;
    for (std::size_t i = 0; i < per_piece; ++i) {
      const double t = (static_cast<double>(i) + 0.5) * h;
      const double u = t * (1.0 - t);
      const double g = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
      node(a + width * g, 30.0 * u * u * width * h);
    }
  }
}

template <class F>
double reference_integral(F&& f, std::span<const double> breaks, std::size_t intervals = kReferenceQuadrature) {
  double sum = 0.0;
  double comp = 0.0;
  for_each_reference_node(
      breaks,
      [&](double x, double w) {
        const double y = f(x) * w - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
      },
      intervals);
  return sum;
}

template <class F>
double reference_integral(F&& f, std::size_t intervals = kReferenceQuadrature) {
  const double unit[2] = {0.0, 1.0};
  return reference_integral(std::forward<F>(f), std::span<const double>(unit, 2), intervals);
}

/// Sorted union of two breakpoint lists (both containing 0 and 1).
std::vector<double> merge_breaks(std::span<const double> a, std::span<const double> b);

/// Gram matrix int phi_lambda phi_mu over [0,1] on the reference nodes, row-major D x D.
std::vector<double> gram_matrix(const Model& model, std::size_t intervals = kReferenceQuadrature);

}  // namespace lpocv
