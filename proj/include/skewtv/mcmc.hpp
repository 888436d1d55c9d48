#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "skewtv/priors.hpp"
#include "skewtv/skew_symmetric.hpp"

namespace skewtv {

/// Target definition: likelihood family + data + proper prior on lambda,
/// joined by the partial-information structure pi(mu, sigma, lambda) =
/// p(lambda)/sigma. In prior-only mode (testing) the target is p(lambda)
/// alone and (mu, sigma) stay at their initial values.
struct PosteriorSpec {
  SkewFamily family;
  double dof;
  std::vector<double> data;
  LambdaPrior lambda_prior;
  bool prior_only;

  static PosteriorSpec for_data(SkewFamily family, std::vector<double> data,
                                LambdaPrior lambda_prior, double dof = 0.0);
  static PosteriorSpec prior_only_mode(LambdaPrior lambda_prior);

  /// Propriety guard: n >= 2 and not all observations equal.
  void validate_for_sampling() const;
};

struct ChainConfig {
  std::size_t iterations = 0;
  std::size_t burn_in = 10000;
  std::size_t thin = 100;
  std::uint64_t seed = 0;
  double target_acceptance = 0.44;
  std::size_t adapt_horizon = 0;  // 0 means "same as burn_in"

  std::size_t effective_adapt_horizon() const {
    return adapt_horizon == 0 ? burn_in : adapt_horizon;
  }
  void validate() const;
};

struct PosteriorChain {
  struct Draw {
    double mu, sigma, lambda;
  };

  std::vector<Draw> draws;
  std::vector<double> log_post;  // log_posterior at each retained draw
  std::array<double, 3> acceptance{};        // post-adaptation, per coordinate
  std::array<double, 3> scales_at_freeze{};  // proposal scales when adaptation stopped
  std::array<double, 3> final_scales{};
  ChainConfig config;

  /// Column extraction: 0 = mu, 1 = sigma, 2 = lambda.
  std::vector<double> parameter(std::size_t index) const;
};

/// Unnormalized log posterior: sum_j log s(x_j; mu, sigma, lambda)
/// + log p(lambda) - log sigma. Returns -inf for sigma <= 0.
double log_posterior(const PosteriorSpec& spec, double mu, double sigma,
                     double lambda);

/// Coordinate-wise random-walk Metropolis on (mu, log sigma, lambda). The
/// log sigma Jacobian cancels the 1/sigma prior, so the transformed target is
/// loglik + log p(lambda). Gaussian proposal scales adapt in batches of 50
/// during burn-in, scale *= exp((batch acceptance - target)/sqrt(batch index)),
/// and freeze after adapt_horizon. Retained draws are post-burn-in, every
/// thin-th iterate. Deterministic given the seed.
PosteriorChain run_chain(const PosteriorSpec& spec, const ChainConfig& config);

}  // namespace skewtv
