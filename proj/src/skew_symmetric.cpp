#include "skewtv/skew_symmetric.hpp"

#include <cmath>
#include <stdexcept>

#include "skewtv/quadrature.hpp"
#include "skewtv/special.hpp"

namespace skewtv {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void validate(const SkewSymmetricModel& m) {
  if (!(m.sigma > 0.0))
    throw std::domain_error("SkewSymmetricModel: sigma must be positive");
  if (m.family == SkewFamily::SkewT && !(m.dof > 0.0))
    throw std::domain_error("SkewSymmetricModel: skew-t dof must be positive");
  if (!std::isfinite(m.mu) || !std::isfinite(m.lambda))
    throw std::domain_error("SkewSymmetricModel: parameters must be finite");
}

// Marsaglia-Tsang gamma draw, shape only (unit scale). Shapes below one use
// the Gamma(a+1) * U^(1/a) boost.
double gamma_draw(double shape, CounterRng& rng) {
  if (shape < 1.0) {
    const double u = rng.next_uniform();
    return gamma_draw(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = special::norm_quantile(rng.next_uniform());
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

const char* skew_family_name(SkewFamily f) {
  switch (f) {
    case SkewFamily::SkewNormal: return "skew-normal";
    case SkewFamily::SkewLogistic: return "skew-logistic";
    case SkewFamily::SkewLaplace: return "skew-laplace";
    case SkewFamily::SkewT: return "skew-t";
  }
  return "?";
}

SkewSymmetricModel SkewSymmetricModel::skew_normal(double mu, double sigma,
                                                   double lambda) {
  return preset(SkewFamily::SkewNormal, mu, sigma, lambda);
}

SkewSymmetricModel SkewSymmetricModel::skew_logistic(double mu, double sigma,
                                                     double lambda) {
  return preset(SkewFamily::SkewLogistic, mu, sigma, lambda);
}

SkewSymmetricModel SkewSymmetricModel::skew_laplace(double mu, double sigma,
                                                    double lambda) {
  return preset(SkewFamily::SkewLaplace, mu, sigma, lambda);
}

SkewSymmetricModel SkewSymmetricModel::skew_t(double dof, double mu, double sigma,
                                              double lambda) {
  return preset(SkewFamily::SkewT, mu, sigma, lambda, dof);
}

SkewSymmetricModel SkewSymmetricModel::preset(SkewFamily family, double mu,
                                              double sigma, double lambda,
                                              double dof) {
  SkewSymmetricModel m{family, dof, mu, sigma, lambda};
  validate(m);
  return m;
}

SymmetricBase SkewSymmetricModel::base() const {
  switch (family) {
    case SkewFamily::SkewNormal: return SymmetricBase::normal();
    case SkewFamily::SkewLogistic: return SymmetricBase::logistic();
    case SkewFamily::SkewLaplace: return SymmetricBase::laplace();
    case SkewFamily::SkewT: return SymmetricBase::student_t(dof);
  }
  return SymmetricBase::normal();
}

SymmetricBase SkewSymmetricModel::skewing_base() const {
  if (family == SkewFamily::SkewT) return SymmetricBase::student_t(dof + 1.0);
  return base();
}

double SkewSymmetricModel::omega(double z) const {
  if (family == SkewFamily::SkewT)
    return z * std::sqrt((dof + 1.0) / (dof + z * z));
  return z;
}

double SkewSymmetricModel::pdf(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("pdf: x must be finite");
  const double z = (x - mu) / sigma;
  return 2.0 / sigma * base().pdf(z) * skewing_base().cdf(lambda * omega(z));
}

double SkewSymmetricModel::log_pdf(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("log_pdf: x must be finite");
  const double z = (x - mu) / sigma;
  return kLn2 - std::log(sigma) + base().log_pdf(z) +
         skewing_base().log_cdf(lambda * omega(z));
}

double SkewSymmetricModel::cdf(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("cdf: x must be finite");
  const double z = (x - mu) / sigma;
  const SymmetricBase f = base();
  const SymmetricBase g = skewing_base();
  auto standardized = [&](double t) {
    return 2.0 * f.pdf(t) * g.cdf(lambda * omega(t));
  };
  QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  // Integrate the smaller tail for conditioning.
  if (z <= 0.0)
    return integrate_halfline([&](double u) { return standardized(z - u); }, spec);
  return 1.0 - integrate_halfline([&](double u) { return standardized(z + u); },
                                  spec);
}

std::vector<double> SkewSymmetricModel::sample(std::size_t n,
                                               std::uint64_t seed) const {
  if (n < 1) throw std::domain_error("sample: n must be >= 1");
  validate(*this);
  std::vector<double> out;
  out.reserve(n);
  CounterRng rng(seed);
  if (family == SkewFamily::SkewT) {
    const SymmetricBase normal = SymmetricBase::normal();
    for (std::size_t i = 0; i < n; ++i) {
      const double y = normal.sample(rng);
      const double w = normal.sample(rng);
      const double z = (w <= lambda * y) ? y : -y;
      const double v = gamma_draw(0.5 * dof, rng) * (2.0 / dof);  // chi2_nu / nu
      out.push_back(mu + sigma * z / std::sqrt(v));
    }
    return out;
  }
  const SymmetricBase f = base();
  const SymmetricBase g = skewing_base();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = f.sample(rng);
    const double w = g.sample(rng);
    const double z = (w <= lambda * y) ? y : -y;
    out.push_back(mu + sigma * z);
  }
  return out;
}

TwoPieceModel::TwoPieceModel(SymmetricBase base, double gamma_)
    : f(base), gamma(gamma_) {
  if (!(std::fabs(gamma_) < 1.0))
    throw std::domain_error("TwoPieceModel: |gamma| must be < 1");
}

double TwoPieceModel::pdf(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("two_piece_pdf: x must be finite");
  return x < 0.0 ? f.pdf(x / (1.0 - gamma)) : f.pdf(x / (1.0 + gamma));
}

double log_skew_pdf(const SkewSymmetricModel& model, double y) {
  if (!(y > 0.0)) throw std::domain_error("log_skew_pdf: y must be positive");
  const double w = (std::log(y) - model.mu) / model.sigma;
  return 2.0 / (model.sigma * y) * model.base().pdf(w) *
         model.skewing_base().cdf(model.lambda * model.omega(w));
}

}  // namespace skewtv
