#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bclab {

enum class ErrorCode {
  EmptySpace,
  WeightSumOutOfTolerance,
  NegativeWeight,
  SpaceMismatch,
  IndexOutOfRange,
  EmptyRange,
  InvalidArgument,
  TailDoesNotVanish,
  ScanLimitExceeded,
  CoverageUnreachable,
  NonSquare,
  NonFinite,
  OutOfRange,
  PathTooShort,
  ZeroMean,
  SchemaError,
  ValueError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is the
/// stable, machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace bclab
