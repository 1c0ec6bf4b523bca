#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace satnls {

enum class ErrorCode {
  InvalidDimension,
  InvalidSize,
  NonFiniteInput,
  GridMismatch,
  InvalidExponent,
  ComplexPotential,
  InvalidSection,
  ZeroField,
  DegenerateInput,
  UnknownKind,
  LinearSolveDiverged,
  FixedPointDiverged,
  TruncationInvalid,
  InvalidConfig,
  EmptySeries,
  InvalidTime,
  InsufficientData,
  NoPositiveConstant,
  UnsupportedDimension,
  UnknownScenario,
  MissingDiagnostics,
  MissingKey,
  TypeError,
  UnknownKey,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace satnls
