#include "satnls/error.hpp"

namespace satnls {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::ComplexPotential: return "ComplexPotential";
    case ErrorCode::InvalidSection: return "InvalidSection";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::LinearSolveDiverged: return "LinearSolveDiverged";
    case ErrorCode::FixedPointDiverged: return "FixedPointDiverged";
    case ErrorCode::TruncationInvalid: return "TruncationInvalid";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::InvalidTime: return "InvalidTime";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NoPositiveConstant: return "NoPositiveConstant";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::MissingDiagnostics: return "MissingDiagnostics";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace satnls
