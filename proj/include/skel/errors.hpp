#pragma once

#include <stdexcept>
#include <string>

namespace skel {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Angle too close to 0 or pi for the crossing-line kernels.
class SingularAngleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Caller violated an operation's precondition (shape, symmetry, range).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iteration did not converge or a numerical check failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root bracket does not contain a sign change.
class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace skel
