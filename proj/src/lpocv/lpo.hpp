#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lpocv/bases.hpp"
#include "lpocv/estimator.hpp"

namespace lpocv {

using u128 = unsigned __int128;

/// Per-basis sums S_l = sum_j phi_l(X_j) and Q_l = sum_j phi_l(X_j)^2.
struct SufficientStats {
  std::vector<double> sums;
  std::vector<double> sums_sq;
  std::size_t n = 0;

  /// sum_{j != k} phi_l(X_j) phi_l(X_k) = S_l^2 - Q_l.
  double cross(std::size_t l) const noexcept { return sums[l] * sums[l] - sums_sq[l]; }
};

SufficientStats sufficient_stats(const Model& model, const Sample& sample);

struct LpoRisk {
  double value = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::string model;
};

/// Throws InvalidP unless n >= 2 and 1 <= p <= n-1.
void check_p(std::size_t n, std::size_t p);

/// Leave-p-out risk from sufficient statistics in O(D).
double lpo_risk_from_stats(const SufficientStats& stats, std::size_t p);

/// Closed-form leave-p-out risk, O(n D).
LpoRisk lpo_risk_closed(const Model& model, const Sample& sample, std::size_t p);

/// Regular-histogram shortcut computed from bin counts only.
LpoRisk lpo_risk_hist_fast(std::size_t bins, const Sample& sample, std::size_t p);

/// Single-level Haar shortcut computed from the level-j counts n_{j,k}.
LpoRisk lpo_risk_haar_fast(unsigned level, const Sample& sample, std::size_t p);

inline constexpr std::uint64_t kDefaultBruteCap = 1'000'000;

/// Exhaustive average over all C(n,p) test sets, refitting on each training set.
/// Throws CapExceeded when C(n,p) > cap.
LpoRisk lpo_risk_brute(const Model& model, const Sample& sample, std::size_t p, std::uint64_t cap = kDefaultBruteCap);

/// Test-set contrast of the estimator trained on the complement of `test` (0-based indices).
double holdout_risk(const Model& model, const Sample& sample, std::span<const std::size_t> test);

/// V-fold estimate (1/n) sum_v sum_{i in e_v} gamma(s_hat^{(-v)}, X_i) for blocks partitioning {0..n-1}.
double vfold_risk(const Model& model, const Sample& sample, std::span<const std::vector<std::size_t>> blocks);

/// Exact binomial coefficient; throws Overflow beyond 128 bits.
u128 binomial(std::uint64_t n, std::uint64_t k);

std::string to_string(u128 value);

/// The four resample counts for fixed distinct indices i, j, k:
/// #{e : j not in e}, #{e : j,k not in e}, #{e : i in e, j,k not in e}, #{e : i in e, j not in e}.
struct SubsetCounts {
  u128 without_j = 0;
  u128 without_j_k = 0;
  u128 with_i_without_j_k = 0;
  u128 with_i_without_j = 0;
};

SubsetCounts subset_counts(std::uint64_t n, std::uint64_t p);

/// Lexicographic iteration over p-subsets of {0..n-1}; returns false after the last one.
bool next_combination(std::vector<std::size_t>& combo, std::size_t n);

}  // namespace lpocv
