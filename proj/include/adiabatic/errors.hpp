#pragma once

#include <stdexcept>
#include <string>

namespace adiabatic {

/// Broad failure class; the CLI maps these onto process exit codes.
enum class ErrorCategory {
  Config = 1,     // bad input or contract violation by the caller
  Invariant = 2,  // a checked mathematical invariant did not hold
  Numerical = 3,  // a numerical routine failed to converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

template <ErrorCategory C>
class CategorizedError : public Error {
 public:
  explicit CategorizedError(const std::string& message) : Error(C, message) {}
};

using ConfigFailure = CategorizedError<ErrorCategory::Config>;
using InvariantFailure = CategorizedError<ErrorCategory::Invariant>;
using NumericalFailure = CategorizedError<ErrorCategory::Numerical>;

// Caller-side errors.
struct ConfigError : ConfigFailure { using ConfigFailure::ConfigFailure; };
struct NotPowerOfTwo : ConfigFailure { using ConfigFailure::ConfigFailure; };
struct NonFiniteCost : ConfigFailure { using ConfigFailure::ConfigFailure; };
struct CeilingExceeded : ConfigFailure { using ConfigFailure::ConfigFailure; };
struct OracleTooLarge : ConfigFailure { using ConfigFailure::ConfigFailure; };
struct TimeOutOfRange : ConfigFailure { using ConfigFailure::ConfigFailure; };
struct NonMonotoneSchedule : ConfigFailure { using ConfigFailure::ConfigFailure; };
struct StepTooLarge : ConfigFailure { using ConfigFailure::ConfigFailure; };
struct DomainError : ConfigFailure { using ConfigFailure::ConfigFailure; };

// Invariant breakdowns.
struct LengthMismatch : InvariantFailure { using InvariantFailure::InvariantFailure; };
struct NormError : InvariantFailure { using InvariantFailure::InvariantFailure; };
struct SignPatternViolation : InvariantFailure { using InvariantFailure::InvariantFailure; };
struct NormDriftExceeded : InvariantFailure { using InvariantFailure::InvariantFailure; };
struct SandwichViolation : InvariantFailure { using InvariantFailure::InvariantFailure; };

// Numerical breakdowns.
struct ConvergenceFailure : NumericalFailure { using NumericalFailure::NumericalFailure; };
struct EigensolveFailure : NumericalFailure { using NumericalFailure::NumericalFailure; };
struct NonConvergent : NumericalFailure { using NumericalFailure::NumericalFailure; };

}  // namespace adiabatic
