#pragma once

#include <stdexcept>
#include <string>

namespace lpocv {

// Stable error codes; the numeric values are mirrored by lpocv_status in the C header.
enum class ErrorCode : int {
  InvalidArgument = 1,
  OutOfRange = 2,
  EmptySample = 3,
  InvalidP = 4,
  CapExceeded = 5,
  Overflow = 6,
  Parse = 7,
  Io = 8,
  Infeasible = 9,
  Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace lpocv
