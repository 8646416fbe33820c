#include "lpocv/lpo.hpp"

#include <algorithm>
#include <numeric>

#include "lpocv/errors.hpp"
#include "lpocv/kahan.hpp"

namespace lpocv {

void check_p(std::size_t n, std::size_t p) {
  if (n < 2) fail(ErrorCode::InvalidP, "leave-p-out needs at least two observations");
  if (p < 1 || p > n - 1) {
    fail(ErrorCode::InvalidP, "p must lie in [1, n-1]; got p=" + std::to_string(p) + " with n=" + std::to_string(n));
  }
}

SufficientStats sufficient_stats(const Model& model, const Sample& sample) {
  const std::size_t d = model.dim();
  std::vector<KahanSum> s(d), q(d);
  for (double x : sample.values()) {
    model.for_each_nonzero(x, [&](std::size_t l, double v) {
      s[l] += v;
      q[l] += v * v;
    });
  }
  SufficientStats out;
  out.n = sample.size();
  out.sums.resize(d);
  out.sums_sq.resize(d);
  for (std::size_t l = 0; l < d; ++l) {
    out.sums[l] = s[l].value();
    out.sums_sq[l] = q[l].value();
  }
  return out;
}

double lpo_risk_from_stats(const SufficientStats& stats, std::size_t p) {
  const std::size_t n = stats.n;
  check_p(n, p);
  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  const double ratio = (nd - pd + 1.0) / (nd - 1.0);
  KahanSum total;
  for (std::size_t l = 0; l < stats.sums.size(); ++l) total += stats.sums_sq[l] - ratio * stats.cross(l);
  return total.value() / (nd * (nd - pd));
}

LpoRisk lpo_risk_closed(const Model& model, const Sample& sample, std::size_t p) {
  check_p(sample.size(), p);
  return {lpo_risk_from_stats(sufficient_stats(model, sample), p), sample.size(), p, model.name()};
}

namespace {

// (1/((n-1)(n-p))) sum_l width^{-1} [(2n-p) n_l/n - n(n-p+1) (n_l/n)^2] for equal widths 1/cells.
double partition_counts_risk(std::span<const std::size_t> counts, std::size_t n, std::size_t p) {
  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  const double cells = static_cast<double>(counts.size());
  KahanSum total;
  for (std::size_t c : counts) {
    const double freq = static_cast<double>(c) / nd;
    total += cells * ((2.0 * nd - pd) * freq - nd * (nd - pd + 1.0) * freq * freq);
  }
  return total.value() / ((nd - 1.0) * (nd - pd));
}

std::vector<std::size_t> cell_counts(const Sample& sample, std::size_t cells) {
  std::vector<std::size_t> counts(cells, 0);
  for (double x : sample.values()) ++counts[cell_of(x, cells)];
  return counts;
}

}  // namespace

LpoRisk lpo_risk_hist_fast(std::size_t bins, const Sample& sample, std::size_t p) {
  const Model model = Model::histogram(bins);
  check_p(sample.size(), p);
  const auto counts = cell_counts(sample, bins);
  return {partition_counts_risk(counts, sample.size(), p), sample.size(), p, model.name()};
}

LpoRisk lpo_risk_haar_fast(unsigned level, const Sample& sample, std::size_t p) {
  const Model model = Model::haar_scaling(level);
  check_p(sample.size(), p);
  const auto counts = cell_counts(sample, std::size_t{1} << level);
  return {partition_counts_risk(counts, sample.size(), p), sample.size(), p, model.name()};
}

bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
  const std::size_t k = combo.size();
  if (k == 0) return false;
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

LpoRisk lpo_risk_brute(const Model& model, const Sample& sample, std::size_t p, std::uint64_t cap) {
  const std::size_t n = sample.size();
  check_p(n, p);
  u128 splits = 0;
  try {
    splits = binomial(n, p);
  } catch (const Error&) {
    fail(ErrorCode::CapExceeded, "C(n,p) overflows; use the closed form");
  }
  if (splits > cap) {
    fail(ErrorCode::CapExceeded,
         "C(" + std::to_string(n) + "," + std::to_string(p) + ") = " + to_string(splits) + " exceeds enumeration cap " +
             std::to_string(cap) + "; use the closed form");
  }

  const std::size_t d = model.dim();
  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < n; ++i) model.eval_all(sample[i], std::span<double>(values.data() + i * d, d));

  std::vector<std::size_t> test(p);
  std::iota(test.begin(), test.end(), std::size_t{0});
  std::vector<char> in_test(n);
  std::vector<double> coeffs(d);
  KahanSum total;
  std::uint64_t count = 0;
  do {
    std::fill(in_test.begin(), in_test.end(), 0);
    for (std::size_t i : test) in_test[i] = 1;
    std::fill(coeffs.begin(), coeffs.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (in_test[i]) continue;
      for (std::size_t l = 0; l < d; ++l) coeffs[l] += values[i * d + l];
    }
    double norm2 = 0.0;
    for (double& a : coeffs) {
      a /= static_cast<double>(n - p);
      norm2 += a * a;
    }
    double at_test = 0.0;
    for (std::size_t i : test) {
      double v = 0.0;
      for (std::size_t l = 0; l < d; ++l) v += coeffs[l] * values[i * d + l];
      at_test += v;
    }
    total += norm2 - 2.0 * at_test / static_cast<double>(p);
    ++count;
  } while (next_combination(test, n));
  return {total.value() / static_cast<double>(count), n, p, model.name()};
}

namespace {

std::vector<std::size_t> complement(std::span<const std::size_t> subset, std::size_t n) {
  std::vector<char> mark(n, 0);
  for (std::size_t i : subset) {
    if (i >= n) fail(ErrorCode::InvalidArgument, "index " + std::to_string(i) + " out of range");
    if (mark[i]) fail(ErrorCode::InvalidArgument, "duplicate index " + std::to_string(i));
    mark[i] = 1;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mark[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

double holdout_risk(const Model& model, const Sample& sample, std::span<const std::size_t> test) {
  if (test.empty()) fail(ErrorCode::InvalidArgument, "hold-out test set is empty");
  const auto train = complement(test, sample.size());
  if (train.empty()) fail(ErrorCode::InvalidArgument, "hold-out test set covers the whole sample");
  const auto est = fit_projection(model, sample, train);
  return empirical_contrast(est, sample, test);
}

double vfold_risk(const Model& model, const Sample& sample, std::span<const std::vector<std::size_t>> blocks) {
  const std::size_t n = sample.size();
  if (blocks.size() < 2) fail(ErrorCode::InvalidArgument, "V-fold needs at least two blocks");
  std::vector<char> seen(n, 0);
  std::size_t covered = 0;
  for (const auto& block : blocks) {
    if (block.empty()) fail(ErrorCode::InvalidArgument, "V-fold block is empty");
    for (std::size_t i : block) {
      if (i >= n) fail(ErrorCode::InvalidArgument, "V-fold index " + std::to_string(i) + " out of range");
      if (seen[i]) fail(ErrorCode::InvalidArgument, "V-fold blocks overlap at index " + std::to_string(i));
      seen[i] = 1;
      ++covered;
    }
  }
  if (covered != n) fail(ErrorCode::InvalidArgument, "V-fold blocks do not cover the sample");

  KahanSum total;
  for (const auto& block : blocks) {
    const auto train = complement(block, n);
    const auto est = fit_projection(model, sample, train);
    const double norm2 = est.squared_norm();
    for (std::size_t i : block) total += norm2 - 2.0 * est(sample[i]);
  }
  return total.value() / static_cast<double>(n);
}

u128 binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // c * (n-k+i) / i is an integer; divide out gcd(c, i) first so the product cannot overflow spuriously.
    const u128 num = n - k + i;
    u128 den = i;
    u128 a = c, b = den;
    while (b != 0) {
      const u128 t = a % b;
      a = b;
      b = t;
    }
    const u128 g = a;
    c /= g;
    den /= g;
    const u128 factor = num / den;
    u128 product;
    if (__builtin_mul_overflow(c, factor, &product)) {
      fail(ErrorCode::Overflow, "C(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds 128-bit range");
    }
    c = product;
  }
  return c;
}

std::string to_string(u128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

SubsetCounts subset_counts(std::uint64_t n, std::uint64_t p) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "subset counts need n >= 3 (three distinct indices)");
  if (p < 1 || p > n - 1) fail(ErrorCode::InvalidP, "p must lie in [1, n-1]");
  SubsetCounts c;
  c.without_j = binomial(n - 1, p);
  c.without_j_k = binomial(n - 2, p);
  c.with_i_without_j_k = binomial(n - 3, p - 1);
  c.with_i_without_j = binomial(n - 2, p - 1);
  return c;
}

}  // namespace lpocv
