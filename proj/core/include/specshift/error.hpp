#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specshift {

enum class ErrorKind {
  NonFinite,
  ConvergenceFailure,
  DomainError,
  DegeneratePair,
  BadInterval,
  BadParams,
  UnknownFunction,
  RefinementOverflow,
  PreconditionViolated,
  IndexError,
  DegenerateIncrement,
  InvariantViolation,
  DimensionMismatch,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` carries the failure class.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace specshift
