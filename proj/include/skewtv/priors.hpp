#pragma once

#include <string>
#include <variant>

#include "skewtv/perturbation.hpp"

namespace skewtv {

/// Prior on lambda induced by a Beta(alpha, beta) law on M_TV(lambda)
/// (shifted to (-1/2, 1/2)). Proper by construction.
struct BtvPrior {
  double alpha;
  double beta;
  PerturbationMeasure measure;

  BtvPrior(double alpha_, double beta_, PerturbationMeasure measure_);

  /// BTV(1,1): uniform law on the perturbation measure.
  static BtvPrior uniform_tv(SkewFamily family, double dof = 0.0);
  /// BTV(1/2,1/2): Jeffreys law on the perturbation measure.
  static BtvPrior jeffreys_tv(SkewFamily family, double dof = 0.0);
  static BtvPrior make(SkewFamily family, double alpha, double beta,
                       double dof = 0.0);

  double density(double lambda) const;
  double log_density(double lambda) const;
};

/// Student-t approximations to the Jeffreys prior: skew-normal t(1/2, pi/2),
/// skew-logistic t(1/2, 4/3), skew-Laplace 1/(4 s0 (1+|lambda/s0|)^{3/2})
/// with s0 = 0.77. Other families are unsupported.
double jeffreys_approx_density(SkewFamily family, double lambda);
double jeffreys_approx_log_density(SkewFamily family, double lambda);

/// Cauchy(0, 0.92) approximation to the skew-logistic BTV(1,1) prior.
double student_t_approx_btv11_logistic(double lambda);

/// Skew-normal prior on lambda: (2/s0) phi((l-m0)/s0) Phi(l0 (l-m0)/s0).
double cs13_density(double mu0, double sigma0, double lambda0, double lambda);
double cs13_log_density(double mu0, double sigma0, double lambda0, double lambda);

/// Scaled Student-t density on lambda (used for the named approximations).
double student_t_scaled_density(double dof, double scale, double lambda);

struct BetaElicitation {
  double alpha;
  double beta;
  double achieved_q_lo;  // on the M_TV scale (-1/2, 1/2)
  double achieved_q_hi;
};

/// Find (alpha, beta) so the Beta(alpha, beta) quantiles at p_lo and p_hi
/// equal q_lo + 1/2 and q_hi + 1/2. Damped Newton on (log alpha, log beta)
/// with a coordinate-bisection fallback; throws ElicitationError when no
/// positive solution is found.
BetaElicitation elicit_beta(double p_lo, double q_lo, double p_hi, double q_hi);

/// Dispatch over the prior kinds used in the studies and the CLI.
class LambdaPrior {
 public:
  static LambdaPrior btv(BtvPrior prior);
  static LambdaPrior jeffreys_approx(SkewFamily family);
  static LambdaPrior cs13(double mu0, double sigma0, double lambda0);
  static LambdaPrior student_t_approx(double dof, double scale);

  double density(double lambda) const;
  double log_density(double lambda) const;
  const std::string& name() const noexcept { return name_; }

 private:
  struct JeffreysKind { SkewFamily family; };
  struct Cs13Kind { double mu0, sigma0, lambda0; };
  struct StudentTKind { double dof, scale; };
  using Kind = std::variant<BtvPrior, JeffreysKind, Cs13Kind, StudentTKind>;

  LambdaPrior(Kind kind, std::string name);

  Kind kind_;
  std::string name_;
};

}  // namespace skewtv
