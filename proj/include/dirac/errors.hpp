#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dirac {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation at a point where the field or potential is singular.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quadrature estimate too coarse to trust.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration, e.g. a time step too large for the lattice.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to reach its tolerance. Carries the best
/// estimate reached and the residual history so callers can report them.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate,
                   std::vector<double> history = {})
      : Error(what), best_estimate_(best_estimate), history_(std::move(history)) {}

  double best_estimate() const noexcept { return best_estimate_; }
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  double best_estimate_;
  std::vector<double> history_;
};

}  // namespace dirac
