#include "dialx/error.hpp"

namespace dialx {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::InconsistentOutcome: return "InconsistentOutcome";
    case ErrorCode::DuplicateDialogue: return "DuplicateDialogue";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::EmptyDialogue: return "EmptyDialogue";
    case ErrorCode::MixedDialogueIds: return "MixedDialogueIds";
    case ErrorCode::OverlappingBins: return "OverlappingBins";
    case ErrorCode::CoverageGap: return "CoverageGap";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::DuplicatePredicate: return "DuplicatePredicate";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicatePredicateInBucket: return "DuplicatePredicateInBucket";
    case ErrorCode::UnknownPredicate: return "UnknownPredicate";
    case ErrorCode::UnknownEffect: return "UnknownEffect";
    case ErrorCode::NoEffectObserved: return "NoEffectObserved";
    case ErrorCode::NoSupport: return "NoSupport";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace dialx
