#pragma once

#include <stdexcept>
#include <string>

namespace lobound {

/// Malformed or out-of-range user input (maps to CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative kernel exhausted its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix violates a structural invariant (e.g. a hollow block with a
/// nonzero diagonal). Distinct from a failed positivity test.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A primal or dual point failed its feasibility test.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double max_residual)
      : std::runtime_error(what), max_residual_(max_residual) {}
  double max_residual() const noexcept { return max_residual_; }

 private:
  double max_residual_;
};

/// A bound was requested from a certificate that has not passed verification.
class UnverifiedCertificate : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lobound
