#pragma once

#include <stdexcept>
#include <string>

namespace ccl {

/// Query outside the stored domain of a piecewise function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive construction hit the degree and piece caps without resolving f.
class ApproximationError : public std::runtime_error {
 public:
  ApproximationError(const std::string& what, double worst_residual)
      : std::runtime_error(what), worst_residual_(worst_residual) {}

  /// Largest relative tail coefficient over the unresolved pieces.
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

/// A solver could not produce an answer (no characteristic candidates,
/// no converged boundary value problem, CFL violation, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed problem description or run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ccl
