#pragma once

namespace skewtv::special {

/// Standard normal density.
double norm_pdf(double x);
double norm_log_pdf(double x);

/// Standard normal cdf, computed as erfc(-x/sqrt(2))/2 so both tails keep
/// full relative accuracy down to the underflow threshold.
double norm_cdf(double x);

/// log Phi(x). Uses the erfc form for x >= -8 and the Mills-ratio
/// asymptotic series below, so the result stays finite far into the tail.
double norm_log_cdf(double x);

/// Inverse standard normal cdf. Acklam's rational approximation refined by
/// one Halley step; absolute accuracy near machine precision on (0,1).
double norm_quantile(double p);

/// log of the beta function B(a,b).
double log_beta(double a, double b);

/// Regularized incomplete beta function I_x(a,b), a,b > 0, x in [0,1].
/// Continued-fraction evaluation (modified Lentz).
double ibeta(double a, double b, double x);

/// Inverse of ibeta in x: returns x with I_x(a,b) = p. Newton iteration with
/// a bracketing safeguard.
double ibeta_inv(double a, double b, double p);

}  // namespace skewtv::special
