#include "kppfront/error.hpp"

namespace kppfront {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::ScalingViolation: return "ScalingViolation";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorCode::SpeedBelowCritical: return "SpeedBelowCritical";
    case ErrorCode::SlopeOutOfRange: return "SlopeOutOfRange";
    case ErrorCode::NoCapture: return "NoCapture";
    case ErrorCode::UnstableEscape: return "UnstableEscape";
    case ErrorCode::LevelNotCrossed: return "LevelNotCrossed";
    case ErrorCode::NonMonotoneProfile: return "NonMonotoneProfile";
    case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::StepTooSmall: return "StepTooSmall";
    case ErrorCode::PositivityViolation: return "PositivityViolation";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace kppfront
