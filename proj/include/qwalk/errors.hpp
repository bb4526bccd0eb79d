#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

enum class ErrorCode {
  InvalidParameter,
  NotHermitian,
  NotUnitary,
  Nonsquare,
  DimensionMismatch,
  TooLarge,
  Numerical,
};

const char* to_string(ErrorCode code);

/// Exception thrown by every fallible operation of the core library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qwalk
