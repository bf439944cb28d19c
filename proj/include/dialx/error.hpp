#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dialx {

enum class ErrorCode {
  EmptyTrace,
  SchemaMismatch,
  RangeViolation,
  MalformedCsv,
  InconsistentOutcome,
  DuplicateDialogue,
  MalformedInput,
  EmptyDialogue,
  MixedDialogueIds,
  OverlappingBins,
  CoverageGap,
  UnknownAttribute,
  DuplicatePredicate,
  SyntaxError,
  DuplicatePredicateInBucket,
  UnknownPredicate,
  UnknownEffect,
  NoEffectObserved,
  NoSupport,
  InstanceTooLarge,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the rule parser; `position` is a 0-based byte offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error(ErrorCode::SyntaxError, message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace dialx
