#include "sparsegrid/error.hpp"

namespace sparsegrid {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::CountTooLarge: return "CountTooLarge";
    case ErrorCode::SobolExhausted: return "SobolExhausted";
    case ErrorCode::AlreadySampled: return "AlreadySampled";
    case ErrorCode::DegenerateField: return "DegenerateField";
    case ErrorCode::EmptyPointSet: return "EmptyPointSet";
    case ErrorCode::TooManyPoints: return "TooManyPoints";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InfiniteEntry: return "InfiniteEntry";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptHeader: return "CorruptHeader";
    case ErrorCode::CropTooLarge: return "CropTooLarge";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingDataset: return "MissingDataset";
  }
  return "Unknown";
}

static std::string format_message(ErrorCode code, const std::string& message, long line) {
  std::string out{to_string(code)};
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

Error::Error(ErrorCode code, const std::string& message, long line)
    : std::runtime_error(format_message(code, message, line)), code_(code), line_(line) {}

}  // namespace sparsegrid
