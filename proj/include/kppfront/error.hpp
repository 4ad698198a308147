#pragma once

#include <stdexcept>
#include <string>

namespace kppfront {

enum class ErrorCode {
  InvalidArgument,
  ValidationError,
  ScalingViolation,
  DivisionByZero,
  DomainError,
  NotAnEquilibrium,
  SpeedBelowCritical,
  SlopeOutOfRange,
  NoCapture,
  UnstableEscape,
  LevelNotCrossed,
  NonMonotoneProfile,
  GridTooNarrow,
  BlowUp,
  StepTooSmall,
  PositivityViolation,
  InsufficientData,
  PreconditionViolation,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the scenario runner) can report it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }
  /// what() without the leading "<code>: ".
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace kppfront
