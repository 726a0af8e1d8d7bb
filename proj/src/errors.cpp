#include "innov/errors.hpp"

namespace innov {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidFrame: return "InvalidFrame";
    case ErrorCode::InvalidSet: return "InvalidSet";
    case ErrorCode::EmptyFocal: return "EmptyFocal";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::TotalConflict: return "TotalConflict";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::MarkerNotFound: return "MarkerNotFound";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::GenotypeMismatch: return "GenotypeMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SourceError: return "SourceError";
    case ErrorCode::DuplicateDocument: return "DuplicateDocument";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

TotalConflictError::TotalConflictError(std::size_t step, const std::string& what)
    : Error(ErrorCode::TotalConflict, what), step_(step) {}

}  // namespace innov
