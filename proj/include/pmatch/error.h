#pragma once

#include <stdexcept>
#include <string>

namespace pmatch {

enum class ErrorCode {
  kDegenerateConfiguration,
  kPointAtInfinity,
  kRankDeficient,
  kInsufficientData,
  kNoPentagonFound,
  kNoGroupFound,
  kEmptyInput,
  kInvalidArgument,
  kParseError,
  kIoError,
};

const char* to_string(ErrorCode code);

/// Exception type thrown by every pmatch routine. The code identifies the
/// failure class so callers (notably the CLI) can map it onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::kPointAtInfinity: return "PointAtInfinity";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kNoPentagonFound: return "NoPentagonFound";
    case ErrorCode::kNoGroupFound: return "NoGroupFound";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pmatch
