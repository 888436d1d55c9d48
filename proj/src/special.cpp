#include "skewtv/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace skewtv::special {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log sqrt(2*pi)

}  // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

double norm_log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double norm_log_cdf(double x) {
  if (x >= -8.0) return std::log(norm_cdf(x));
  // Phi(-a) = phi(a)/a * (1 - 1/a^2 + 3/a^4 - ...); truncate at the smallest
  // term, which for a >= 8 is far below double precision.
  const double a = -x;
  const double a2 = a * a;
  double term = 1.0, sum = 1.0, prev = 1.0;
  for (int k = 1; k <= 64; ++k) {
    term *= -(2.0 * k - 1.0) / a2;
    if (std::fabs(term) >= prev) break;  // series turned asymptotic
    sum += term;
    prev = std::fabs(term);
    if (prev < 1e-18 * sum) break;
  }
  return -0.5 * a2 - std::log(a) - kLogSqrt2Pi + std::log(sum);
}

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("norm_quantile: p must lie in (0,1)");

  // Acklam's piecewise rational approximation, |rel err| < 1.2e-9.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against the erfc-based cdf pushes the error to ~1e-16.
  const double e = norm_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 1000;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) return h;
  }
  throw std::runtime_error("ibeta: continued fraction did not converge for a=" +
                           std::to_string(a) + " b=" + std::to_string(b));
}

}  // namespace

double ibeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("ibeta: a and b must be positive");
  if (std::isnan(x)) throw std::domain_error("ibeta: x is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  const double bt =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double ibeta_inv(double a, double b, double p) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("ibeta_inv: a and b must be positive");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("ibeta_inv: p must lie in [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  // Initial guess (Numerical Recipes 6.4 style).
  double x;
  if (a >= 1.0 && b >= 1.0) {
    const double t = norm_quantile(p);
    const double al = (t * t - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = t * std::sqrt(al + h) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                         (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (p < t / w)
      x = std::pow(a * w * p, 1.0 / a);
    else
      x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
  }
  x = std::fmin(std::fmax(x, 1e-300), 1.0 - 1e-16);

  // Safeguarded Newton on I_x(a,b) - p.
  double lo = 0.0, hi = 1.0;
  const double lnB = log_beta(a, b);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = ibeta(a, b, x) - p;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    if (std::fabs(f) < 1e-15 || hi - lo < 1e-16 * std::fmax(x, 1e-10)) break;
    const double logd = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lnB;
    double step = f * std::exp(-logd);
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // bisect when Newton escapes
    if (xn == x) break;
    x = xn;
  }
  return x;
}

}  // namespace skewtv::special
