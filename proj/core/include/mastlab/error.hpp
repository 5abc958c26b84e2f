#pragma once

#include <stdexcept>
#include <string>

namespace mastlab {

// Precondition violated by the caller (bad size, label outside the tree, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An internal consistency check failed. The CLI maps this to exit code 1.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested computation exceeds the configured budget. The CLI maps this to
// exit code 2.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double estimated_cost)
      : std::runtime_error(what), estimated_cost_(estimated_cost) {}
  double estimated_cost() const noexcept { return estimated_cost_; }

 private:
  double estimated_cost_;
};

}  // namespace mastlab
