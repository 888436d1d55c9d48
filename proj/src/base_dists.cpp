#include "skewtv/base_dists.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "skewtv/special.hpp"

namespace skewtv {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void require_finite(double x) {
  if (!std::isfinite(x)) throw std::domain_error("SymmetricBase: x must be finite");
}

double student_t_log_norm(double dof) {
  return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
         0.5 * std::log(dof * M_PI);
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::Normal: return "normal";
    case Family::Logistic: return "logistic";
    case Family::Laplace: return "laplace";
    case Family::StudentT: return "student-t";
  }
  return "?";
}

SymmetricBase SymmetricBase::student_t(double dof) {
  if (!(dof > 0.0))
    throw std::domain_error("SymmetricBase: Student-t dof must be positive");
  return SymmetricBase(Family::StudentT, dof);
}

double SymmetricBase::pdf(double x) const {
  require_finite(x);
  switch (family_) {
    case Family::Normal:
      return special::norm_pdf(x);
    case Family::Logistic: {
      const double e = std::exp(-std::fabs(x));
      const double d = 1.0 + e;
      return e / (d * d);
    }
    case Family::Laplace:
      return 0.5 * std::exp(-std::fabs(x));
    case Family::StudentT:
      return std::exp(log_pdf(x));
  }
  return 0.0;
}

double SymmetricBase::log_pdf(double x) const {
  require_finite(x);
  switch (family_) {
    case Family::Normal:
      return special::norm_log_pdf(x);
    case Family::Logistic: {
      const double ax = std::fabs(x);
      return -ax - 2.0 * std::log1p(std::exp(-ax));
    }
    case Family::Laplace:
      return -std::fabs(x) - kLn2;
    case Family::StudentT:
      return student_t_log_norm(dof_) -
             0.5 * (dof_ + 1.0) * std::log1p(x * x / dof_);
  }
  return -std::numeric_limits<double>::infinity();
}

double SymmetricBase::cdf(double x) const {
  require_finite(x);
  switch (family_) {
    case Family::Normal:
      return special::norm_cdf(x);
    case Family::Logistic:
      return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                      : std::exp(x) / (1.0 + std::exp(x));
    case Family::Laplace:
      return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
    case Family::StudentT: {
      if (x == 0.0) return 0.5;
      const double u = dof_ / (dof_ + x * x);
      const double tail = 0.5 * special::ibeta(0.5 * dof_, 0.5, u);
      return x > 0.0 ? 1.0 - tail : tail;
    }
  }
  return 0.0;
}

double SymmetricBase::log_cdf(double x) const {
  require_finite(x);
  switch (family_) {
    case Family::Normal:
      return special::norm_log_cdf(x);
    case Family::Logistic:
      return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
    case Family::Laplace:
      return x < 0.0 ? x - kLn2 : std::log1p(-0.5 * std::exp(-x));
    case Family::StudentT: {
      if (x >= 0.0) return std::log(cdf(x));
      const double u = dof_ / (dof_ + x * x);
      return std::log(0.5 * special::ibeta(0.5 * dof_, 0.5, u));
    }
  }
  return -std::numeric_limits<double>::infinity();
}

double SymmetricBase::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("SymmetricBase: quantile needs p in (0,1)");
  switch (family_) {
    case Family::Normal:
      return special::norm_quantile(p);
    case Family::Logistic:
      return std::log(p) - std::log1p(-p);
    case Family::Laplace:
      return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
    case Family::StudentT: {
      if (p == 0.5) return 0.0;
      const double pp = p < 0.5 ? p : 1.0 - p;
      const double u = special::ibeta_inv(0.5 * dof_, 0.5, 2.0 * pp);
      const double x = std::sqrt(dof_ * (1.0 - u) / u);
      return p < 0.5 ? -x : x;
    }
  }
  return 0.0;
}

}  // namespace skewtv
