#pragma once

#include <stdexcept>
#include <string>

namespace shrinktarget {

enum class ErrorCode {
  InvalidArgument,
  EmptyFamily,
  BoundedTimeSet,
  SingularMatrix,
  UnsupportedSpectrum,
  EmptyShift,
  NotMixing,
  Reducible,
  Undecidable,
  PeriodMismatch,
  HypothesisViolated,
  MapClassMismatch,
  Infeasible,
  Internal,
  Validation,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-readable code so the
// C boundary can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shrinktarget
