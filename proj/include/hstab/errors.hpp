#pragma once

#include <stdexcept>
#include <string>

namespace hstab {

/// Malformed or inconsistent user input (group specs, configs, class labels).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured size cap, state budget or time budget was exceeded.
/// Computations that throw this never leave partial results behind.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A move was applied to a vector outside its domain.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An invariant that must hold by construction was observed to fail.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hstab
