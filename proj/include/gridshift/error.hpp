#pragma once

#include <stdexcept>
#include <string>

namespace gridshift {

enum class ErrorCode {
  InvalidArgument = 1,
  InvalidBandwidth,
  InvalidPoint,
  DimensionMismatch,
  OutOfRange,
  Io,
  Parse,
};

// All failures in the core surface as this exception; the C API maps `code()`
// onto gs_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gridshift
