#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lpocv {

struct VerifyOptions {
  std::size_t cases = 500;       // random (model, sample) pairs
  std::size_t max_n = 12;
  std::uint64_t max_subsets = 10'000;  // only p with C(n,p) <= this are brute-forced
  std::uint64_t seed = 0;
  double tolerance = 1e-10;      // |closed - brute| / max(1, |brute|)
};

struct VerifyCheck {
  std::string kind;   // closed-vs-brute, hist-fast, haar-fast
  std::string model;
  std::size_t n = 0;
  std::size_t p = 0;
  double reference = 0.0;
  double value = 0.0;
  double rel_error = 0.0;
  bool pass = false;
};

struct VerifyFamilySummary {
  std::string family;
  std::size_t cases = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double max_rel_error = 0.0;
};

struct VerifyReport {
  std::vector<VerifyCheck> failures;      // only failing checks are kept
  std::vector<VerifyFamilySummary> families;
  std::size_t cases = 0;
  std::size_t checks = 0;
  double max_rel_error = 0.0;
  bool pass() const noexcept { return failures.empty() && checks > 0; }
};

/// Random samples from every basis family; the closed form is compared with exhaustive
/// resampling at every p whose C(n,p) fits the budget, and the histogram/Haar shortcuts
/// with the general closed form.
VerifyReport run_verification(const VerifyOptions& options);

}  // namespace lpocv
