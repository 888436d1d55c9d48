#pragma once

#include <cstdint>
#include <vector>

#include "skewtv/base_dists.hpp"

namespace skewtv {

enum class SkewFamily { SkewNormal, SkewLogistic, SkewLaplace, SkewT };

const char* skew_family_name(SkewFamily f);

/// Skew-symmetric model: density (2/sigma) f(z) G(lambda * omega(z)) with
/// z = (x-mu)/sigma. The presets pair f with its own cdf as skewing function
/// and omega(z) = z, except the skew-t which uses f = t(nu), G = cdf of
/// t(nu+1) and omega(z) = z * sqrt((nu+1)/(nu+z^2)).
struct SkewSymmetricModel {
  SkewFamily family;
  double dof;  // skew-t only
  double mu;
  double sigma;
  double lambda;

  static SkewSymmetricModel skew_normal(double mu, double sigma, double lambda);
  static SkewSymmetricModel skew_logistic(double mu, double sigma, double lambda);
  static SkewSymmetricModel skew_laplace(double mu, double sigma, double lambda);
  static SkewSymmetricModel skew_t(double dof, double mu, double sigma, double lambda);
  static SkewSymmetricModel preset(SkewFamily family, double mu, double sigma,
                                   double lambda, double dof = 0.0);

  /// The symmetric density being skewed.
  SymmetricBase base() const;
  /// The base whose cdf acts as the skewing function G.
  SymmetricBase skewing_base() const;
  double omega(double z) const;

  double pdf(double x) const;
  double log_pdf(double x) const;
  /// Numerical cdf (adaptive quadrature of the density).
  double cdf(double x) const;

  /// n i.i.d. draws, deterministic given the seed. Selection sampling:
  /// Y ~ f, W ~ G, emit mu + sigma*Y if W <= lambda*Y else mu - sigma*Y.
  /// The skew-t draws a skew-normal variate and divides by sqrt(chi2_nu/nu).
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;
};

/// Two-piece density f(x/(1-gamma)) for x < 0, f(x/(1+gamma)) for x >= 0.
struct TwoPieceModel {
  SymmetricBase f;
  double gamma;

  TwoPieceModel(SymmetricBase base, double gamma_);
  double pdf(double x) const;
};

/// Log-skew-symmetric density of Y = exp(X) for X skew-symmetric:
/// (2/(sigma*y)) f(w) G(lambda*omega(w)) with w = (log y - mu)/sigma, y > 0.
double log_skew_pdf(const SkewSymmetricModel& model, double y);

}  // namespace skewtv
