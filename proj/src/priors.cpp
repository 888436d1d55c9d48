#include "skewtv/priors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "skewtv/errors.hpp"
#include "skewtv/special.hpp"

namespace skewtv {

namespace {

// Keep the Beta factors finite at extreme lambda when alpha or beta < 1.
constexpr double kMClamp = 0.5 - 1e-15;

double clamp_m(double m) {
  return std::fmin(std::fmax(m, -kMClamp), kMClamp);
}

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

BtvPrior::BtvPrior(double alpha_, double beta_, PerturbationMeasure measure_)
    : alpha(alpha_), beta(beta_), measure(measure_) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::domain_error("BtvPrior: alpha and beta must be positive");
}

BtvPrior BtvPrior::uniform_tv(SkewFamily family, double dof) {
  return make(family, 1.0, 1.0, dof);
}

BtvPrior BtvPrior::jeffreys_tv(SkewFamily family, double dof) {
  return make(family, 0.5, 0.5, dof);
}

BtvPrior BtvPrior::make(SkewFamily family, double alpha, double beta, double dof) {
  return BtvPrior(alpha, beta, PerturbationMeasure::for_family(family, dof));
}

double BtvPrior::density(double lambda) const {
  const double m = clamp_m(measure.value(lambda));
  const double d = measure.derivative(lambda);
  return std::exp(-special::log_beta(alpha, beta)) *
         std::pow(m + 0.5, alpha - 1.0) * std::pow(0.5 - m, beta - 1.0) * d;
}

double BtvPrior::log_density(double lambda) const {
  const double m = clamp_m(measure.value(lambda));
  const double d = measure.derivative(lambda);
  return -special::log_beta(alpha, beta) + (alpha - 1.0) * std::log(m + 0.5) +
         (beta - 1.0) * std::log(0.5 - m) + std::log(d);
}

double student_t_scaled_density(double dof, double scale, double lambda) {
  const double z = lambda / scale;
  return std::exp(std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                  0.5 * std::log(dof * M_PI) -
                  0.5 * (dof + 1.0) * std::log1p(z * z / dof)) /
         scale;
}

double jeffreys_approx_density(SkewFamily family, double lambda) {
  switch (family) {
    case SkewFamily::SkewNormal:
      return student_t_scaled_density(0.5, M_PI / 2.0, lambda);
    case SkewFamily::SkewLogistic:
      return student_t_scaled_density(0.5, 4.0 / 3.0, lambda);
    case SkewFamily::SkewLaplace: {
      const double s0 = 0.77;
      return 1.0 / (4.0 * s0 * std::pow(1.0 + std::fabs(lambda / s0), 1.5));
    }
    default:
      throw std::domain_error(
          "jeffreys_approx_density: no approximation for this family");
  }
}

double jeffreys_approx_log_density(SkewFamily family, double lambda) {
  return std::log(jeffreys_approx_density(family, lambda));
}

double student_t_approx_btv11_logistic(double lambda) {
  const double s = 0.92;
  return 1.0 / (M_PI * s * (1.0 + (lambda / s) * (lambda / s)));
}

double cs13_density(double mu0, double sigma0, double lambda0, double lambda) {
  if (!(sigma0 > 0.0)) throw std::domain_error("cs13: sigma0 must be positive");
  const double z = (lambda - mu0) / sigma0;
  return 2.0 / sigma0 * special::norm_pdf(z) * special::norm_cdf(lambda0 * z);
}

double cs13_log_density(double mu0, double sigma0, double lambda0, double lambda) {
  if (!(sigma0 > 0.0)) throw std::domain_error("cs13: sigma0 must be positive");
  const double z = (lambda - mu0) / sigma0;
  return std::log(2.0 / sigma0) + special::norm_log_pdf(z) +
         special::norm_log_cdf(lambda0 * z);
}

namespace {

// Residuals of the two quantile conditions, in the Beta's native [0,1] scale.
// Evaluation failures (continued fraction stalls at extreme shapes) read as
// "not a solution" rather than escaping the solver.
bool quantile_residuals(double a, double b, double p_lo, double p_hi,
                        double u_lo, double u_hi, double* r0, double* r1) {
  try {
    *r0 = special::ibeta_inv(a, b, p_lo) - u_lo;
    *r1 = special::ibeta_inv(a, b, p_hi) - u_hi;
  } catch (const std::exception&) {
    return false;
  }
  return std::isfinite(*r0) && std::isfinite(*r1);
}

}  // namespace

BetaElicitation elicit_beta(double p_lo, double q_lo, double p_hi, double q_hi) {
  if (!(p_lo > 0.0 && p_lo < p_hi && p_hi < 1.0))
    throw std::domain_error("elicit_beta: need 0 < p_lo < p_hi < 1");
  if (!(q_lo > -0.5 && q_lo < q_hi && q_hi < 0.5))
    throw std::domain_error("elicit_beta: need -1/2 < q_lo < q_hi < 1/2");

  const double u_lo = q_lo + 0.5;
  const double u_hi = q_hi + 0.5;

  // Normal-approximation start: match mean and spread implied by the targets.
  const double z_lo = special::norm_quantile(p_lo);
  const double z_hi = special::norm_quantile(p_hi);
  double s = (u_hi - u_lo) / (z_hi - z_lo);
  double mean = u_lo - z_lo * s;
  mean = std::fmin(std::fmax(mean, 0.02), 0.98);
  double total = mean * (1.0 - mean) / (s * s) - 1.0;
  if (!(total > 0.2)) total = 0.2;
  double la = std::log(mean * total);
  double lb = std::log((1.0 - mean) * total);

  double r0, r1;
  if (!quantile_residuals(std::exp(la), std::exp(lb), p_lo, p_hi, u_lo, u_hi,
                          &r0, &r1))
    throw ElicitationError("elicit_beta: cannot evaluate the starting point");
  double err = std::fabs(r0) + std::fabs(r1);

  const double kTol = 1e-9;
  bool converged = err < kTol;
  for (int iter = 0; iter < 200 && !converged; ++iter) {
    const double h = 1e-6;
    double r0a, r1a, r0b, r1b;
    if (!quantile_residuals(std::exp(la + h), std::exp(lb), p_lo, p_hi, u_lo,
                            u_hi, &r0a, &r1a) ||
        !quantile_residuals(std::exp(la), std::exp(lb + h), p_lo, p_hi, u_lo,
                            u_hi, &r0b, &r1b))
      break;
    const double j00 = (r0a - r0) / h, j01 = (r0b - r0) / h;
    const double j10 = (r1a - r1) / h, j11 = (r1b - r1) / h;
    const double det = j00 * j11 - j01 * j10;
    if (!std::isfinite(det) || std::fabs(det) < 1e-30) break;
    const double da = (r0 * j11 - r1 * j01) / det;
    const double db = (r1 * j00 - r0 * j10) / det;

    double step = 1.0;
    for (int bt = 0; bt < 40; ++bt) {
      const double la_n = la - step * da;
      const double lb_n = lb - step * db;
      if (std::fabs(la_n) < 14.0 && std::fabs(lb_n) < 14.0) {
        double r0n, r1n;
        if (quantile_residuals(std::exp(la_n), std::exp(lb_n), p_lo, p_hi, u_lo,
                               u_hi, &r0n, &r1n)) {
          const double err_n = std::fabs(r0n) + std::fabs(r1n);
          if (err_n < err) {
            la = la_n;
            lb = lb_n;
            r0 = r0n;
            r1 = r1n;
            err = err_n;
            break;
          }
        }
      }
      step *= 0.5;
    }
    converged = err < kTol;
  }

  if (!converged) {
    // Coordinate bisection fallback: the lower quantile rises with alpha and
    // the upper quantile falls with beta, so alternate one-dimensional solves.
    auto safe_quantile = [](double a, double b, double p) {
      try {
        const double q = special::ibeta_inv(a, b, p);
        return std::isfinite(q) ? q : 0.5;
      } catch (const std::exception&) {
        return 0.5;
      }
    };
    for (int sweep = 0; sweep < 500 && !converged; ++sweep) {
      double b = std::exp(lb);
      double alo = 1e-6, ahi = 1e6;
      for (int it = 0; it < 120; ++it) {
        const double a = std::sqrt(alo * ahi);
        if (safe_quantile(a, b, p_lo) < u_lo)
          alo = a;
        else
          ahi = a;
      }
      la = 0.5 * (std::log(alo) + std::log(ahi));
      const double a = std::exp(la);
      double blo = 1e-6, bhi = 1e6;
      for (int it = 0; it < 120; ++it) {
        const double bb = std::sqrt(blo * bhi);
        if (safe_quantile(a, bb, p_hi) > u_hi)
          blo = bb;
        else
          bhi = bb;
      }
      lb = 0.5 * (std::log(blo) + std::log(bhi));
      if (!quantile_residuals(std::exp(la), std::exp(lb), p_lo, p_hi, u_lo, u_hi,
                              &r0, &r1))
        break;
      err = std::fabs(r0) + std::fabs(r1);
      converged = err < 1e-6;
    }
  }

  if (!converged || err > 1e-6)
    throw ElicitationError("elicit_beta: no (alpha, beta) reaches the targets");

  const double a = std::exp(la), b = std::exp(lb);
  return BetaElicitation{a, b, special::ibeta_inv(a, b, p_lo) - 0.5,
                         special::ibeta_inv(a, b, p_hi) - 0.5};
}

LambdaPrior::LambdaPrior(Kind kind, std::string name)
    : kind_(std::move(kind)), name_(std::move(name)) {}

LambdaPrior LambdaPrior::btv(BtvPrior prior) {
  std::string name = "BTV(" + format_double(prior.alpha) + "," +
                     format_double(prior.beta) + ")";
  return LambdaPrior(Kind(std::move(prior)), std::move(name));
}

LambdaPrior LambdaPrior::jeffreys_approx(SkewFamily family) {
  jeffreys_approx_density(family, 0.0);  // reject unsupported families early
  return LambdaPrior(Kind(JeffreysKind{family}), "Jeffreys");
}

LambdaPrior LambdaPrior::cs13(double mu0, double sigma0, double lambda0) {
  if (!(sigma0 > 0.0)) throw std::domain_error("cs13: sigma0 must be positive");
  std::string name = "SN(" + format_double(mu0) + "," + format_double(sigma0) +
                     "," + format_double(lambda0) + ")";
  return LambdaPrior(Kind(Cs13Kind{mu0, sigma0, lambda0}), std::move(name));
}

LambdaPrior LambdaPrior::student_t_approx(double dof, double scale) {
  if (!(dof > 0.0) || !(scale > 0.0))
    throw std::domain_error("student_t_approx: dof and scale must be positive");
  std::string name =
      "t(" + format_double(dof) + "," + format_double(scale) + ")";
  return LambdaPrior(Kind(StudentTKind{dof, scale}), std::move(name));
}

double LambdaPrior::density(double lambda) const {
  return std::visit(
      [lambda](const auto& kind) -> double {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, BtvPrior>)
          return kind.density(lambda);
        else if constexpr (std::is_same_v<T, JeffreysKind>)
          return jeffreys_approx_density(kind.family, lambda);
        else if constexpr (std::is_same_v<T, Cs13Kind>)
          return cs13_density(kind.mu0, kind.sigma0, kind.lambda0, lambda);
        else
          return student_t_scaled_density(kind.dof, kind.scale, lambda);
      },
      kind_);
}

double LambdaPrior::log_density(double lambda) const {
  return std::visit(
      [lambda](const auto& kind) -> double {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, BtvPrior>)
          return kind.log_density(lambda);
        else if constexpr (std::is_same_v<T, JeffreysKind>)
          return jeffreys_approx_log_density(kind.family, lambda);
        else if constexpr (std::is_same_v<T, Cs13Kind>)
          return cs13_log_density(kind.mu0, kind.sigma0, kind.lambda0, lambda);
        else
          return std::log(
              student_t_scaled_density(kind.dof, kind.scale, lambda));
      },
      kind_);
}

}  // namespace skewtv
