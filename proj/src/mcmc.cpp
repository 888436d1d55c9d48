#include "skewtv/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skewtv/errors.hpp"
#include "skewtv/special.hpp"

namespace skewtv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kBatchSize = 50;

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  double hi = v[n / 2];
  if (n % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
  return 0.5 * (v[n / 2 - 1] + hi);
}

double robust_scale(const std::vector<double>& x, double center) {
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::fabs(x[i] - center);
  const double mad = median_of(std::move(dev));
  if (mad > 0.0) return 1.4826 * mad;
  // MAD can vanish when more than half the observations tie; fall back to
  // the standard deviation (positive because not all values are equal).
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace

PosteriorSpec PosteriorSpec::for_data(SkewFamily family, std::vector<double> data,
                                      LambdaPrior lambda_prior, double dof) {
  for (double v : data)
    if (!std::isfinite(v))
      throw std::domain_error("PosteriorSpec: data values must be finite");
  return PosteriorSpec{family, dof, std::move(data), std::move(lambda_prior),
                       false};
}

PosteriorSpec PosteriorSpec::prior_only_mode(LambdaPrior lambda_prior) {
  return PosteriorSpec{SkewFamily::SkewNormal, 0.0, {}, std::move(lambda_prior),
                       true};
}

void PosteriorSpec::validate_for_sampling() const {
  if (prior_only) return;
  if (data.size() < 2)
    throw ProprietyError("posterior propriety requires n >= 2 observations");
  const double first = data.front();
  bool all_equal = true;
  for (double v : data)
    if (v != first) {
      all_equal = false;
      break;
    }
  if (all_equal)
    throw ProprietyError(
        "posterior propriety requires at least two distinct observations");
}

void ChainConfig::validate() const {
  if (thin < 1) throw std::domain_error("ChainConfig: thin must be >= 1");
  if (iterations < burn_in + thin)
    throw std::domain_error("ChainConfig: iterations must be >= burn_in + thin");
}

std::vector<double> PosteriorChain::parameter(std::size_t index) const {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const Draw& d : draws) {
    switch (index) {
      case 0: out.push_back(d.mu); break;
      case 1: out.push_back(d.sigma); break;
      case 2: out.push_back(d.lambda); break;
      default: throw std::out_of_range("PosteriorChain: parameter index");
    }
  }
  return out;
}

double log_posterior(const PosteriorSpec& spec, double mu, double sigma,
                     double lambda) {
  if (spec.prior_only) return spec.lambda_prior.log_density(lambda);
  if (!(sigma > 0.0)) return kNegInf;
  const SkewSymmetricModel model =
      SkewSymmetricModel::preset(spec.family, mu, sigma, lambda, spec.dof);
  double ll = 0.0;
  for (double x : spec.data) ll += model.log_pdf(x);
  return ll + spec.lambda_prior.log_density(lambda) - std::log(sigma);
}

namespace {

// Transformed target on (mu, log sigma, lambda): the log sigma Jacobian
// cancels the 1/sigma prior factor.
double transformed_target(const PosteriorSpec& spec, double mu, double log_sigma,
                          double lambda) {
  if (spec.prior_only) return spec.lambda_prior.log_density(lambda);
  const double sigma = std::exp(log_sigma);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) return kNegInf;
  const SkewSymmetricModel model =
      SkewSymmetricModel::preset(spec.family, mu, sigma, lambda, spec.dof);
  double ll = 0.0;
  for (double x : spec.data) ll += model.log_pdf(x);
  return ll + spec.lambda_prior.log_density(lambda);
}

}  // namespace

PosteriorChain run_chain(const PosteriorSpec& spec, const ChainConfig& config) {
  config.validate();
  spec.validate_for_sampling();

  const std::size_t adapt_horizon = config.effective_adapt_horizon();

  // Initial state.
  double mu0 = 0.0, sigma0 = 1.0;
  if (!spec.prior_only) {
    mu0 = median_of(spec.data);
    sigma0 = robust_scale(spec.data, mu0);
  }
  double state[3] = {mu0, std::log(sigma0), 0.0};

  double scales[3] = {1.0, 0.5, 1.0};
  if (!spec.prior_only)
    scales[0] = sigma0 / std::sqrt(static_cast<double>(spec.data.size()));

  double target = transformed_target(spec, state[0], state[1], state[2]);
  if (!std::isfinite(target))
    throw InitializationError(
        "run_chain: log posterior is not finite at the initial point");

  const std::size_t first_coord = spec.prior_only ? 2 : 0;

  CounterRng rng(config.seed);
  PosteriorChain chain;
  chain.config = config;
  const std::size_t retained = (config.iterations - config.burn_in) / config.thin;
  chain.draws.reserve(retained);
  chain.log_post.reserve(retained);

  std::size_t batch_accepts[3] = {0, 0, 0};
  std::size_t post_accepts[3] = {0, 0, 0};
  std::size_t post_proposals[3] = {0, 0, 0};

  for (std::size_t iter = 1; iter <= config.iterations; ++iter) {
    for (std::size_t j = first_coord; j < 3; ++j) {
      const double old = state[j];
      state[j] = old + scales[j] * special::norm_quantile(rng.next_uniform());
      const double proposed_target =
          transformed_target(spec, state[0], state[1], state[2]);
      const double log_u = std::log(rng.next_uniform());
      const bool accept =
          std::isfinite(proposed_target) && log_u < proposed_target - target;
      if (accept)
        target = proposed_target;
      else
        state[j] = old;
      batch_accepts[j] += accept;
      if (iter > adapt_horizon) {
        post_accepts[j] += accept;
        ++post_proposals[j];
      }
    }

    if (iter % kBatchSize == 0 && iter <= adapt_horizon) {
      const double batch_index = static_cast<double>(iter / kBatchSize);
      for (std::size_t j = first_coord; j < 3; ++j) {
        const double rate =
            static_cast<double>(batch_accepts[j]) / static_cast<double>(kBatchSize);
        scales[j] *= std::exp((rate - config.target_acceptance) /
                              std::sqrt(batch_index));
      }
    }
    if (iter % kBatchSize == 0)
      for (std::size_t j = 0; j < 3; ++j) batch_accepts[j] = 0;

    if (iter == adapt_horizon)
      chain.scales_at_freeze = {scales[0], scales[1], scales[2]};

    if (iter > config.burn_in && (iter - config.burn_in) % config.thin == 0) {
      chain.draws.push_back({state[0], std::exp(state[1]), state[2]});
      chain.log_post.push_back(target - state[1]);  // back to the sigma scale
    }
  }

  chain.final_scales = {scales[0], scales[1], scales[2]};
  if (adapt_horizon == 0 || adapt_horizon >= config.iterations)
    chain.scales_at_freeze = chain.final_scales;
  for (std::size_t j = 0; j < 3; ++j)
    chain.acceptance[j] =
        post_proposals[j] > 0
            ? static_cast<double>(post_accepts[j]) / post_proposals[j]
            : std::numeric_limits<double>::quiet_NaN();
  return chain;
}

}  // namespace skewtv
