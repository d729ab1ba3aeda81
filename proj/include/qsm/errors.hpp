#pragma once

#include <stdexcept>
#include <string>

namespace qsm {

enum class ErrorCode {
  EigenFailure,
  NotPositiveSemidefinite,
  NonFinite,
  DimensionMismatch,
  InvalidVector,
  InvalidRank,
  NumericalBreakdown,
  ZeroCenter,
  InvalidConfiguration,
  InvalidPool,
  NotTraceZero,
  DomainError,
  InvalidParameter,
  NotIsometryEvidence,
  NotImplementable,
  ParseError,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure raised by the library. `value()` carries
/// the offending number when one exists (an eigenvalue, a residual, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double value = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidVector: return "InvalidVector";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::ZeroCenter: return "ZeroCenter";
    case ErrorCode::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorCode::InvalidPool: return "InvalidPool";
    case ErrorCode::NotTraceZero: return "NotTraceZero";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NotIsometryEvidence: return "NotIsometryEvidence";
    case ErrorCode::NotImplementable: return "NotImplementable";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace qsm
