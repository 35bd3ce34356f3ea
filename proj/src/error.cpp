#include "bclab/error.hpp"

namespace bclab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::WeightSumOutOfTolerance: return "WeightSumOutOfTolerance";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TailDoesNotVanish: return "TailDoesNotVanish";
    case ErrorCode::ScanLimitExceeded: return "ScanLimitExceeded";
    case ErrorCode::CoverageUnreachable: return "CoverageUnreachable";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::PathTooShort: return "PathTooShort";
    case ErrorCode::ZeroMean: return "ZeroMean";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValueError: return "ValueError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace bclab
