#include "qwalk/errors.hpp"

namespace qwalk {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::Nonsquare: return "Nonsquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Numerical: return "Numerical";
  }
  return "Unknown";
}

}  // namespace qwalk
