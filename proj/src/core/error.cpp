#include "error.hpp"

namespace shrinktarget {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::BoundedTimeSet: return "BoundedTimeSet";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::UnsupportedSpectrum: return "UnsupportedSpectrum";
    case ErrorCode::EmptyShift: return "EmptyShift";
    case ErrorCode::NotMixing: return "NotMixing";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::Undecidable: return "Undecidable";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::MapClassMismatch: return "MapClassMismatch";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Internal: return "Internal";
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace shrinktarget
