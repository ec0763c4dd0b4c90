#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace angbill {

enum class ErrorCode {
  DegenerateDual,
  ZeroMomentum,
  InvalidAxes,
  CenterOutside,
  NonConvex,
  DegreeTooLow,
  SingularEncountered,
  BudgetExceeded,
  NoConvergence,
  InteriorPoint,
  SCurveSingularity,
  TangentialChord,
  NoIntersection,
  ParityMismatch,
  OddDegree,
  SignViolation,
  ParityError,
  InvalidInput,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateDual: return "DegenerateDual";
    case ErrorCode::ZeroMomentum: return "ZeroMomentum";
    case ErrorCode::InvalidAxes: return "InvalidAxes";
    case ErrorCode::CenterOutside: return "CenterOutside";
    case ErrorCode::NonConvex: return "NonConvex";
    case ErrorCode::DegreeTooLow: return "DegreeTooLow";
    case ErrorCode::SingularEncountered: return "SingularEncountered";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InteriorPoint: return "InteriorPoint";
    case ErrorCode::SCurveSingularity: return "SCurveSingularity";
    case ErrorCode::TangentialChord: return "TangentialChord";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::ParityMismatch: return "ParityMismatch";
    case ErrorCode::OddDegree: return "OddDegree";
    case ErrorCode::SignViolation: return "SignViolation";
    case ErrorCode::ParityError: return "ParityError";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Exception thrown by every numerical routine in the library.
///
/// Orbit drivers re-throw with the index of the step that failed, so a caller
/// can report exactly where an iteration left the domain of the map.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> step = std::nullopt)
      : std::runtime_error(compose(code, what, step)),
        code_(code),
        detail_(what),
        step_(step) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

  Error at_step(std::size_t step) const { return Error(code_, detail_, step); }

 private:
  static std::string compose(ErrorCode code, const std::string& what,
                             std::optional<std::size_t> step) {
    std::string s(to_string(code));
    if (step) s += " at step " + std::to_string(*step);
    if (!what.empty()) s += ": " + what;
    return s;
  }

  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> step_;
};

}  // namespace angbill
