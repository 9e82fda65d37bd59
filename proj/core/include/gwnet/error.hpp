#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gwnet {

enum class ErrorCode {
  kInvalidArgument,
  kNonSquareWeights,
  kNonFiniteValue,
  kSizeMismatch,
  kNonPositiveMass,
  kMeasureNotNormalized,
  kMarginalMismatch,
  kIndexOutOfRange,
  kInfeasible,
  kKernelUnderflow,
  kMaxItersExceeded,
  kRangeTooWide,
  kDomainError,
  kKindMismatch,
  kUnsupportedDimension,
  kInstanceTooLarge,
  kZeroSize,
  kEmptyBlock,
  kUnknownPreset,
  kZeroNetwork,
  kNonSquare,
  kParseError,
  kIoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported as gwnet::Error; code() distinguishes them.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gwnet
