// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef WLSEVI_ERRORS_HPP
#define WLSEVI_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace wlsevi {

enum class ErrorCode {
  EmptyOrTiny,
  NonPositive,
  NonFinite,
  KOutOfRange,
  KTooSmall,
  InvalidRho,
  NegativePenalty,
  EmptyInput,
  DegenerateTail,
  GridEmpty,
  UOutOfRange,
  InvalidParameter,
  NonPositiveMean,
  EmptyEstimatorSet,
  NonPositiveTrueGamma,
  TooFewReplications,
  InvalidConfig,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyOrTiny: return "EmptyOrTiny";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::KTooSmall: return "KTooSmall";
    case ErrorCode::InvalidRho: return "InvalidRho";
    case ErrorCode::NegativePenalty: return "NegativePenalty";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateTail: return "DegenerateTail";
    case ErrorCode::GridEmpty: return "GridEmpty";
    case ErrorCode::UOutOfRange: return "UOutOfRange";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonPositiveMean: return "NonPositiveMean";
    case ErrorCode::EmptyEstimatorSet: return "EmptyEstimatorSet";
    case ErrorCode::NonPositiveTrueGamma: return "NonPositiveTrueGamma";
    case ErrorCode::TooFewReplications: return "TooFewReplications";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace wlsevi

#endif  // WLSEVI_ERRORS_HPP
