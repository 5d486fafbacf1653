#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rlg {

enum class ErrorCode {
  InvalidArgument,
  SizeMismatch,
  NotInvolution,
  FixedPoint,
  OddHalfEdges,
  IndexOutOfRange,
  RejectionBudgetExhausted,
  BudgetExceeded,
  ResourceBudgetExceeded,
  NotClosed,
  Backtracking,
  LengthOutOfRange,
  DivisibilityViolation,
  SpectralUnavailable,
  ConvergenceFailure,
  TooFewEigenvalues,
  DomainError,
  MissingPerron,
  TooFewSamples,
  MissingCounts,
  MissingColumn,
  EmptyInput,
  InvalidConfig,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NotInvolution: return "NotInvolution";
    case ErrorCode::FixedPoint: return "FixedPoint";
    case ErrorCode::OddHalfEdges: return "OddHalfEdges";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::RejectionBudgetExhausted: return "RejectionBudgetExhausted";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ResourceBudgetExceeded: return "ResourceBudgetExceeded";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::Backtracking: return "Backtracking";
    case ErrorCode::LengthOutOfRange: return "LengthOutOfRange";
    case ErrorCode::DivisibilityViolation: return "DivisibilityViolation";
    case ErrorCode::SpectralUnavailable: return "SpectralUnavailable";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::TooFewEigenvalues: return "TooFewEigenvalues";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::MissingPerron: return "MissingPerron";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::MissingCounts: return "MissingCounts";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (and tests) can branch on the kind of failure, not the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace rlg
