#pragma once

#include "skewtv/skew_symmetric.hpp"

namespace skewtv {

/// The signed perturbation measure M_TV of a standardized skew-symmetric
/// preset: sign(lambda) times the total variation distance between f and the
/// skewed density. Odd, strictly increasing, with range (-1/2, 1/2).
///
/// Closed forms: skew-normal and skew-t use arctan(lambda)/pi, skew-Laplace
/// uses lambda/(2(1+|lambda|)). Everything else integrates numerically; the
/// quadrature path can also be forced for the closed-form families, which the
/// tests use as an independent oracle.
class PerturbationMeasure {
 public:
  enum class Mode { ClosedForm, Quadrature };

  static PerturbationMeasure for_family(SkewFamily family, double dof = 0.0);
  static PerturbationMeasure quadrature(SkewFamily family, double dof = 0.0);

  SkewFamily family() const noexcept { return family_; }
  Mode mode() const noexcept { return mode_; }
  double dof() const noexcept { return dof_; }

  /// d_TV(f, s_{f;G} | lambda) in [0, 1/2).
  double tv_distance(double lambda) const;
  /// M_TV(lambda) = sign(lambda) * tv_distance(lambda).
  double value(double lambda) const;
  /// dM_TV/dlambda = 2 int_0^inf omega(x) f(x) g(lambda*omega(x)) dx > 0.
  double derivative(double lambda) const;
  /// The unique lambda with M_TV(lambda) = m, |m| < 1/2.
  double inverse(double m) const;

 private:
  PerturbationMeasure(SkewFamily family, double dof, Mode mode);

  double value_quadrature(double lambda) const;
  double derivative_quadrature(double lambda) const;

  SkewFamily family_;
  double dof_;
  Mode mode_;
};

}  // namespace skewtv
