#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsegrid {

enum class ErrorCode {
  InvalidArgument,
  InsufficientPoints,
  FormatError,
  DuplicatePoint,
  OutOfBounds,
  CountTooLarge,
  SobolExhausted,
  AlreadySampled,
  DegenerateField,
  EmptyPointSet,
  TooManyPoints,
  InvalidSchedule,
  DegenerateGeometry,
  InvalidParams,
  DimsMismatch,
  EmptySet,
  InfiniteEntry,
  UnsupportedFormat,
  CorruptHeader,
  CropTooLarge,
  IoError,
  MissingDataset,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long line = 0);

  ErrorCode code() const noexcept { return code_; }
  // 1-based line number for text-format errors, 0 otherwise.
  long line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  long line_;
};

}  // namespace sparsegrid
