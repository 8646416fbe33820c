#include "lpocv/errors.hpp"

namespace lpocv {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::EmptySample: return "empty_sample";
    case ErrorCode::InvalidP: return "invalid_p";
    case ErrorCode::CapExceeded: return "cap_exceeded";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace lpocv
