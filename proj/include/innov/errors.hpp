#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace innov {

enum class ErrorCode {
  InvalidFrame,
  InvalidSet,
  EmptyFocal,
  NotNormalized,
  InvalidAlpha,
  FrameMismatch,
  TotalConflict,
  EmptyGroup,
  MarkerNotFound,
  EmptyBatch,
  OutOfRange,
  DegenerateSeries,
  InvalidPattern,
  InvalidConfig,
  GenotypeMismatch,
  TooLarge,
  SourceError,
  DuplicateDocument,
  EmptyCorpus,
  InvalidSpec,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the pairwise fold when two evidence sources are fully
// contradictory. `step` is 1-based: step i combines the running result with
// source i+1.
class TotalConflictError : public Error {
 public:
  TotalConflictError(std::size_t step, const std::string& what);

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace innov
