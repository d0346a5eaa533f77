#include "lanemden/errors.hpp"

namespace lanemden {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotOnHyperbola: return "NotOnHyperbola";
    case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::BracketNotFound: return "BracketNotFound";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::PositivityLost: return "PositivityLost";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::TailValidationFailed: return "TailValidationFailed";
    case ErrorCode::DivergentTail: return "DivergentTail";
    case ErrorCode::NormalizationMismatch: return "NormalizationMismatch";
    case ErrorCode::OutOfChart: return "OutOfChart";
    case ErrorCode::ChartViolation: return "ChartViolation";
    case ErrorCode::NonpositiveScale: return "NonpositiveScale";
    case ErrorCode::NonpositivePhi: return "NonpositivePhi";
    case ErrorCode::NoCriticalPointFound: return "NoCriticalPointFound";
    case ErrorCode::SeparationUnsatisfiable: return "SeparationUnsatisfiable";
    case ErrorCode::OverlappingSupports: return "OverlappingSupports";
    case ErrorCode::NonRadialPotential: return "NonRadialPotential";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::CacheFormat: return "CacheFormat";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace lanemden
