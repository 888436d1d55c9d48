#pragma once

#include <stdexcept>
#include <string>

namespace skewtv {

/// Quadrature (or another iterative scheme) failed to reach the requested
/// tolerance. Carries the best estimate and its error bound.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Posterior propriety guard: n >= 2 and not all observations equal.
class ProprietyError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Sampler could not start (non-finite log posterior at the initial point).
class InitializationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quantile-based elicitation found no positive (alpha, beta) solution.
class ElicitationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Maximum-likelihood fit failed to converge or the data are degenerate.
class FitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace skewtv
