#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sulfation {

enum class ErrorCode {
  AllInside,
  AllOutside,
  DegenerateGradient,
  NoBracket,
  StencilEscape,
  EmptyImage,
  DimensionMismatch,
  InvalidArgument,
  MaxNewtonIterations,
  LinearSolveFailure,
  SingularPivot,
  HierarchyTooShallow,
  ConfigParse,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AllInside: return "AllInside";
    case ErrorCode::AllOutside: return "AllOutside";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::StencilEscape: return "StencilEscape";
    case ErrorCode::EmptyImage: return "EmptyImage";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MaxNewtonIterations: return "MaxNewtonIterations";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::SingularPivot: return "SingularPivot";
    case ErrorCode::HierarchyTooShallow: return "HierarchyTooShallow";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sulfation
