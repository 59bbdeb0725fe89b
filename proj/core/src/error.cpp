#include "specshift/error.hpp"

namespace specshift {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegeneratePair: return "DegeneratePair";
    case ErrorKind::BadInterval: return "BadInterval";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::RefinementOverflow: return "RefinementOverflow";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::DegenerateIncrement: return "DegenerateIncrement";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

}  // namespace specshift
