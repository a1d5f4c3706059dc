#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emu {

enum class ErrorCode {
  NonInvertible,
  BracketFailure,
  DifferentiationFailure,
  NotYoungFunction,
  SpaceMismatch,
  NotMeasurable,
  NegativeInput,
  NonPositiveInput,
  PreconditionViolated,
  ConjugateMismatch,
  SingularLambda,
  HypothesisMissing,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::DifferentiationFailure: return "DifferentiationFailure";
    case ErrorCode::NotYoungFunction: return "NotYoungFunction";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::NotMeasurable: return "NotMeasurable";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ConjugateMismatch: return "ConjugateMismatch";
    case ErrorCode::SingularLambda: return "SingularLambda";
    case ErrorCode::HypothesisMissing: return "HypothesisMissing";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// All library failures are reported through this type; `code()` identifies
// the failure class so callers can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace emu
