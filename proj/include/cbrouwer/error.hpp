#ifndef CBROUWER_ERROR_HPP
#define CBROUWER_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbrouwer {

/// Failure categories surfaced by the library. Every thrown `Error` carries
/// one of these so callers (and the CLI) can branch without string matching.
enum class ErrorCode {
  EmptySpace,
  NonPositiveProbability,
  MassNotOne,
  DimensionMismatch,
  SpaceMismatch,
  MissingPart,
  DomainViolation,
  EmptyFamily,
  NotInSimplex,
  DegenerateVertices,
  AffinelyDependent,
  BudgetExceeded,
  NotSiblings,
  IndexOutOfRange,
  ImageEscapedSimplex,
  ImageEscapedBody,
  NoCompletelyLabeledCell,
  ImproperLabeling,
  MaxRoundsExceeded,
  InvalidBody,
  UnboundedBody,
  TargetOutOfRange,
  NoSignChange,
  ParseError,
  ValidationError,
  EvalError,
  InvalidConfig,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::NonPositiveProbability: return "NonPositiveProbability";
    case ErrorCode::MassNotOne: return "MassNotOne";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::MissingPart: return "MissingPart";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::NotInSimplex: return "NotInSimplex";
    case ErrorCode::DegenerateVertices: return "DegenerateVertices";
    case ErrorCode::AffinelyDependent: return "AffinelyDependent";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotSiblings: return "NotSiblings";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ImageEscapedSimplex: return "ImageEscapedSimplex";
    case ErrorCode::ImageEscapedBody: return "ImageEscapedBody";
    case ErrorCode::NoCompletelyLabeledCell: return "NoCompletelyLabeledCell";
    case ErrorCode::ImproperLabeling: return "ImproperLabeling";
    case ErrorCode::MaxRoundsExceeded: return "MaxRoundsExceeded";
    case ErrorCode::InvalidBody: return "InvalidBody";
    case ErrorCode::UnboundedBody: return "UnboundedBody";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::EvalError: return "EvalError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Error raised at a specific atom; `atom()` is the 0-based atom index.
class AtomError : public Error {
 public:
  AtomError(ErrorCode code, std::size_t atom, const std::string& message)
      : Error(code, "atom " + std::to_string(atom) + ": " + message), atom_(atom) {}

  std::size_t atom() const noexcept { return atom_; }

 private:
  std::size_t atom_;
};

}  // namespace cbrouwer

#endif  // CBROUWER_ERROR_HPP
