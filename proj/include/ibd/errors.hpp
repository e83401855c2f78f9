#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ibd {

// Input outside the domain an operation is defined on (bad parameters,
// wrong graph family, malformed spec text).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A state-space or enumeration size guard was hit.
class BudgetError : public std::length_error {
 public:
  BudgetError(const std::string& what, std::size_t required)
      : std::length_error(what + " (required budget: " + std::to_string(required) + ")"),
        required_(required) {}

  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

// Caller broke a precondition that is not a property of user input.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// alpha = beta = 0: independent reflected random walks, excluded from
// classification.
class ExcludedCaseError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace ibd
