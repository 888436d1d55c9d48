#pragma once

#include <cstdint>

#include "skewtv/rng.hpp"

namespace skewtv {

enum class Family { Normal, Logistic, Laplace, StudentT };

const char* family_name(Family f);

/// A symmetric location-0 scale-1 density with cdf, quantile and sampler.
/// Serves both as the density being skewed and as the skewing cdf.
class SymmetricBase {
 public:
  static SymmetricBase normal() { return SymmetricBase(Family::Normal, 0.0); }
  static SymmetricBase logistic() { return SymmetricBase(Family::Logistic, 0.0); }
  static SymmetricBase laplace() { return SymmetricBase(Family::Laplace, 0.0); }
  static SymmetricBase student_t(double dof);

  Family family() const noexcept { return family_; }
  double dof() const noexcept { return dof_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  /// log cdf with stable deep-tail behaviour (no premature -inf).
  double log_cdf(double x) const;
  double quantile(double p) const;

  /// Inverse-cdf draw; consumes exactly one uniform from the stream.
  double sample(CounterRng& rng) const { return quantile(rng.next_uniform()); }

 private:
  SymmetricBase(Family f, double dof) : family_(f), dof_(dof) {}

  Family family_;
  double dof_;
};

}  // namespace skewtv
