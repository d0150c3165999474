#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sirmech {

enum class ErrorKind {
  NonPositiveCoordinate,
  NonFiniteInput,
  InvalidFractions,
  InvalidParameters,
  InvalidSchedule,
  ChartMismatch,
  SingularDenominator,
  OutsideLegendreDomain,
  ConstraintViolation,
  NewtonDivergence,
  StepAcrossSingularity,
  RhsDomainError,
  MissingDiagnostic,
  NoEpidemic,
  InvalidRunSpec,
  Config,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveCoordinate: return "NonPositiveCoordinate";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::InvalidFractions: return "InvalidFractions";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::InvalidSchedule: return "InvalidSchedule";
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::SingularDenominator: return "SingularDenominator";
    case ErrorKind::OutsideLegendreDomain: return "OutsideLegendreDomain";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::StepAcrossSingularity: return "StepAcrossSingularity";
    case ErrorKind::RhsDomainError: return "RhsDomainError";
    case ErrorKind::MissingDiagnostic: return "MissingDiagnostic";
    case ErrorKind::NoEpidemic: return "NoEpidemic";
    case ErrorKind::InvalidRunSpec: return "InvalidRunSpec";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

/// Failures raised while a run is marching, as opposed to bad input.
constexpr bool is_numerical_failure(ErrorKind kind) noexcept {
  return kind == ErrorKind::NewtonDivergence || kind == ErrorKind::StepAcrossSingularity ||
         kind == ErrorKind::RhsDomainError || kind == ErrorKind::ConstraintViolation;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sirmech
