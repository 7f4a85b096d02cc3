#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nsconic {

enum class ErrorKind {
  DimensionMismatch,
  NotPD,
  NonFinite,
  ExteriorPoint,
  RangeError,
  SingularSystem,
  LineSearchFailure,
  CorrectorStall,
  InputError,
  ExteriorStart,
  BadSpec,
  BadInstance,
  TooLarge,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPD: return "NotPD";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ExteriorPoint: return "ExteriorPoint";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::LineSearchFailure: return "LineSearchFailure";
    case ErrorKind::CorrectorStall: return "CorrectorStall";
    case ErrorKind::InputError: return "InputError";
    case ErrorKind::ExteriorStart: return "ExteriorStart";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::BadInstance: return "BadInstance";
    case ErrorKind::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nsconic
