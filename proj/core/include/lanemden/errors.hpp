#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lanemden {

enum class ErrorCode {
  InvalidArgument,
  NotOnHyperbola,
  UnsupportedRegime,
  BracketNotFound,
  NoConvergence,
  PositivityLost,
  WindowTooShort,
  TailValidationFailed,
  DivergentTail,
  NormalizationMismatch,
  OutOfChart,
  ChartViolation,
  NonpositiveScale,
  NonpositivePhi,
  NoCriticalPointFound,
  SeparationUnsatisfiable,
  OverlappingSupports,
  NonRadialPotential,
  IllConditionedFit,
  ConfigInvalid,
  CacheFormat,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI) can attribute it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace lanemden
