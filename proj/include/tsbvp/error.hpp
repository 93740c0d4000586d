#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsbvp {

enum class ErrorCode {
  OverlappingSegments,
  EmptyTimeScale,
  PointNotInTimeScale,
  UndefinedAtBoundary,
  ReversedBounds,
  InvalidExponent,
  DegenerateDenominator,
  DelayOutOfRange,
  EmptyWindow,
  SamplerExhausted,
  Y1Empty,
  InvalidArgument,
  ConfigParseError,
  UnknownPreset,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OverlappingSegments: return "OverlappingSegments";
    case ErrorCode::EmptyTimeScale: return "EmptyTimeScale";
    case ErrorCode::PointNotInTimeScale: return "PointNotInTimeScale";
    case ErrorCode::UndefinedAtBoundary: return "UndefinedAtBoundary";
    case ErrorCode::ReversedBounds: return "ReversedBounds";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::DelayOutOfRange: return "DelayOutOfRange";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::SamplerExhausted: return "SamplerExhausted";
    case ErrorCode::Y1Empty: return "Y1Empty";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tsbvp
