#include "gwnet/error.hpp"

namespace gwnet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonSquareWeights: return "NonSquareWeights";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kNonPositiveMass: return "NonPositiveMass";
    case ErrorCode::kMeasureNotNormalized: return "MeasureNotNormalized";
    case ErrorCode::kMarginalMismatch: return "MarginalMismatch";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kKernelUnderflow: return "KernelUnderflow";
    case ErrorCode::kMaxItersExceeded: return "MaxItersExceeded";
    case ErrorCode::kRangeTooWide: return "RangeTooWide";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kKindMismatch: return "KindMismatch";
    case ErrorCode::kUnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kZeroSize: return "ZeroSize";
    case ErrorCode::kEmptyBlock: return "EmptyBlock";
    case ErrorCode::kUnknownPreset: return "UnknownPreset";
    case ErrorCode::kZeroNetwork: return "ZeroNetwork";
    case ErrorCode::kNonSquare: return "NonSquare";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gwnet
