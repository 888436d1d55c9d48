#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "skewtv/mcmc.hpp"

namespace skewtv {

/// Empirical quantile with linear interpolation between order statistics
/// (h = (n-1)p + 1 on the sorted sample).
double quantile_type7(std::span<const double> values, double p);

struct Interval {
  double lower;
  double upper;
  bool contains(double v) const { return lower <= v && v <= upper; }
};

/// Equal-tailed credible interval from retained draws at the given level.
Interval credible_interval(std::span<const double> draws, double level);

/// The retained draw with the largest stored log posterior; ties break to
/// the earliest index.
PosteriorChain::Draw map_estimate(const PosteriorChain& chain);

/// Savage-Dickey density ratio BF01 for H0: lambda = 0: Gaussian-kernel
/// density estimate of the posterior at 0 (Silverman-type bandwidth
/// 0.9 min(sd, IQR/1.34) m^{-1/5}) over the prior density at 0.
double savage_dickey_bf(std::span<const double> lambda_draws,
                        const LambdaPrior& prior);

struct MleResult {
  double mu;
  double sigma;
  double lambda;          // raw optimizer value
  double max_log_lik;
  /// |lambda| beyond 1e4 signals a monotone profile; reported as +-inf.
  bool lambda_unbounded() const;
  double lambda_reported() const;
};

/// Maximum likelihood via Nelder-Mead on (mu, log sigma, lambda), multi-start
/// over lambda in {-2, 0, 2}. Passing fixed_lambda pins lambda and fits the
/// remaining two parameters (reduced-model fit).
MleResult mle_fit(SkewFamily family, std::span<const double> data,
                  double dof = 0.0,
                  std::optional<double> fixed_lambda = std::nullopt);

struct BootstrapResult {
  Interval mu;
  Interval sigma;
  Interval lambda;
  std::size_t resamples;
};

/// Nonparametric bootstrap: B resamples with replacement, refit each, then
/// equal-tailed quantile intervals of the refits.
BootstrapResult bootstrap_ci(SkewFamily family, std::span<const double> data,
                             std::size_t resamples, double level,
                             std::uint64_t seed, double dof = 0.0);

}  // namespace skewtv
