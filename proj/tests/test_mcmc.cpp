#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "skewtv/errors.hpp"
#include "skewtv/mcmc.hpp"
#include "skewtv/quadrature.hpp"
#include "skewtv/special.hpp"
#include "test_support.hpp"

using namespace skewtv;

namespace {

LambdaPrior sn_uniform_tv() {
  return LambdaPrior::btv(BtvPrior::uniform_tv(SkewFamily::SkewNormal));
}

LambdaPrior sn_jeffreys_tv() {
  return LambdaPrior::btv(BtvPrior::jeffreys_tv(SkewFamily::SkewNormal));
}

ChainConfig quick_config(std::size_t retained, std::size_t burn_in,
                         std::size_t thin, std::uint64_t seed) {
  ChainConfig cfg;
  cfg.burn_in = burn_in;
  cfg.thin = thin;
  cfg.iterations = burn_in + retained * thin;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("log posterior point values") {
  const auto spec = PosteriorSpec::for_data(SkewFamily::SkewNormal, {0.0},
                                            sn_uniform_tv());
  // log phi(0) + log(1/pi): the n >= 2 guard applies to sampling only.
  CHECK(log_posterior(spec, 0.0, 1.0, 0.0) ==
        doctest::Approx(-2.0636684190541462).epsilon(1e-12));

  const auto sl = PosteriorSpec::for_data(
      SkewFamily::SkewLaplace, {-1.0, 1.0},
      LambdaPrior::btv(BtvPrior::uniform_tv(SkewFamily::SkewLaplace)));
  // 2(-1 - ln 2) + ln(1/2).
  CHECK(log_posterior(sl, 0.0, 1.0, 0.0) ==
        doctest::Approx(-4.079441541679836).epsilon(1e-12));

  CHECK(log_posterior(spec, 0.0, -1.0, 0.0) ==
        -std::numeric_limits<double>::infinity());
  CHECK(log_posterior(spec, 0.0, 0.0, 0.0) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("log posterior difference splits into likelihood and prior parts") {
  const std::vector<double> data = {0.4, -1.2, 2.2, 0.1};
  const auto spec =
      PosteriorSpec::for_data(SkewFamily::SkewNormal, data, sn_uniform_tv());
  const double lambda = 1.7;
  const SkewSymmetricModel plus =
      SkewSymmetricModel::skew_normal(0.3, 1.1, lambda);
  const SkewSymmetricModel minus =
      SkewSymmetricModel::skew_normal(0.3, 1.1, -lambda);
  double loglik_diff = 0.0;
  for (double x : data) loglik_diff += plus.log_pdf(x) - minus.log_pdf(x);
  const double prior = sn_uniform_tv().log_density(lambda) -
                       sn_uniform_tv().log_density(-lambda);
  CHECK(log_posterior(spec, 0.3, 1.1, lambda) -
            log_posterior(spec, 0.3, 1.1, -lambda) ==
        doctest::Approx(loglik_diff + prior).epsilon(1e-12));
}

TEST_CASE("propriety guard") {
  for (SkewFamily fam : {SkewFamily::SkewNormal, SkewFamily::SkewLogistic,
                         SkewFamily::SkewLaplace, SkewFamily::SkewT}) {
    const double dof = 3.0;
    const auto constant = PosteriorSpec::for_data(
        fam, {2.5, 2.5, 2.5, 2.5},
        LambdaPrior::btv(BtvPrior::uniform_tv(fam, dof)), dof);
    CHECK_THROWS_AS(run_chain(constant, quick_config(10, 100, 1, 1)),
                    ProprietyError);
    const auto single = PosteriorSpec::for_data(
        fam, {2.5}, LambdaPrior::btv(BtvPrior::uniform_tv(fam, dof)), dof);
    CHECK_THROWS_AS(run_chain(single, quick_config(10, 100, 1, 1)),
                    ProprietyError);
  }
}

TEST_CASE("initialization error on overflowing data") {
  const auto spec = PosteriorSpec::for_data(SkewFamily::SkewNormal,
                                            {0.0, 1.0, 1e300}, sn_uniform_tv());
  CHECK_THROWS_AS(run_chain(spec, quick_config(10, 100, 1, 1)),
                  InitializationError);
}

TEST_CASE("config validation") {
  ChainConfig cfg;
  cfg.iterations = 100;
  cfg.burn_in = 100;
  cfg.thin = 1;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg.thin = 0;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}

TEST_CASE("chains are deterministic given the seed") {
  const auto data =
      SkewSymmetricModel::skew_normal(0.0, 1.0, 1.0).sample(60, 11);
  const auto spec =
      PosteriorSpec::for_data(SkewFamily::SkewNormal, data, sn_jeffreys_tv());
  const auto cfg = quick_config(200, 500, 2, 77);
  const auto a = run_chain(spec, cfg);
  const auto b = run_chain(spec, cfg);
  REQUIRE(a.draws.size() == b.draws.size());
  for (std::size_t i = 0; i < a.draws.size(); ++i) {
    CHECK(a.draws[i].mu == b.draws[i].mu);
    CHECK(a.draws[i].sigma == b.draws[i].sigma);
    CHECK(a.draws[i].lambda == b.draws[i].lambda);
    CHECK(a.log_post[i] == b.log_post[i]);
  }
  auto cfg2 = cfg;
  cfg2.seed = 78;
  const auto c = run_chain(spec, cfg2);
  CHECK(a.draws.back().mu != c.draws.back().mu);
}

TEST_CASE("retained draws are valid and acceptance lands near the target") {
  const auto data =
      SkewSymmetricModel::skew_normal(0.0, 1.0, 0.0).sample(200, 5150);
  const auto spec =
      PosteriorSpec::for_data(SkewFamily::SkewNormal, data, sn_jeffreys_tv());
  const auto chain = run_chain(spec, quick_config(1000, 2000, 5, 42));
  REQUIRE(chain.draws.size() == 1000);
  for (std::size_t i = 0; i < chain.draws.size(); ++i) {
    CHECK(chain.draws[i].sigma > 0.0);
    CHECK(std::isfinite(chain.log_post[i]));
  }
  for (double rate : chain.acceptance) {
    CHECK(rate > 0.25);
    CHECK(rate < 0.6);
  }
}

TEST_CASE("proposal scales freeze after the adaptation horizon") {
  const auto data =
      SkewSymmetricModel::skew_normal(0.0, 1.0, 2.0).sample(80, 99);
  const auto spec =
      PosteriorSpec::for_data(SkewFamily::SkewNormal, data, sn_jeffreys_tv());
  auto cfg = quick_config(500, 3000, 2, 3);
  cfg.adapt_horizon = 1000;
  const auto chain = run_chain(spec, cfg);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(chain.scales_at_freeze[j] == chain.final_scales[j]);
}

TEST_CASE("prior-only mode reproduces the btv prior law") {
  // Exact cdfs via the beta law on M_TV: BTV(1,1) is Cauchy(0,1) and
  // BTV(1/2,1/2) is the arcsine transform of it.
  auto cauchy_cdf = [](double x) { return 0.5 + std::atan(x) / M_PI; };
  auto arcsine_cdf = [](double x) {
    return 2.0 / M_PI * std::asin(std::sqrt(std::atan(x) / M_PI + 0.5));
  };

  const auto uniform_spec = PosteriorSpec::prior_only_mode(sn_uniform_tv());
  const auto uniform_chain =
      run_chain(uniform_spec, quick_config(10000, 2000, 100, 314));
  CHECK(testsup::ks_statistic(uniform_chain.parameter(2), cauchy_cdf) < 0.02);
  // mu and sigma stay at their initial values in prior-only mode.
  for (const auto& d : uniform_chain.draws) {
    CHECK(d.mu == 0.0);
    CHECK(d.sigma == 1.0);
  }

  // The BTV(1/2,1/2) target has lambda^{-3/2} tails: excursions into the
  // tail persist for ~(lambda/scale)^2 iterations, so use a lower
  // acceptance target (larger steps) and heavier thinning to decorrelate.
  ChainConfig heavy = quick_config(10000, 5000, 500, 314);
  heavy.target_acceptance = 0.15;
  const auto jeffreys_spec = PosteriorSpec::prior_only_mode(sn_jeffreys_tv());
  const auto jeffreys_chain = run_chain(jeffreys_spec, heavy);
  CHECK(testsup::ks_statistic(jeffreys_chain.parameter(2), arcsine_cdf) < 0.02);
}

TEST_CASE("prior-only map estimate sits near the prior mode") {
  const auto spec = PosteriorSpec::prior_only_mode(sn_uniform_tv());
  const auto chain = run_chain(spec, quick_config(10000, 1000, 5, 2718));
  std::size_t best = 0;
  for (std::size_t i = 1; i < chain.log_post.size(); ++i)
    if (chain.log_post[i] > chain.log_post[best]) best = i;
  CHECK(std::fabs(chain.draws[best].lambda) < 0.5);
}

TEST_CASE("chain mean matches the quadrature posterior mean on two points") {
  const std::vector<double> data = {0.3, 1.1};
  const auto spec =
      PosteriorSpec::for_data(SkewFamily::SkewNormal, data, sn_uniform_tv());

  // Three nested adaptive quadratures for E[mu | data] under the same
  // unnormalized posterior, entirely independent of the chain. The outer
  // tolerances must sit well above the inner integration noise or the
  // outer splitter chases that noise forever.
  QuadratureSpec lambda_spec;
  lambda_spec.abs_tol = 1e-11;
  lambda_spec.rel_tol = 1e-11;
  QuadratureSpec sigma_spec;
  sigma_spec.abs_tol = 1e-9;
  sigma_spec.rel_tol = 1e-9;
  sigma_spec.max_subdivisions = 400;
  QuadratureSpec mu_spec;
  mu_spec.abs_tol = 1e-6;
  mu_spec.rel_tol = 1e-6;
  mu_spec.max_subdivisions = 400;
  auto posterior_slice = [&](double mu, double sigma) {
    return integrate_real(
        [&](double lam) {
          return std::exp(log_posterior(spec, mu, sigma, lam));
        },
        lambda_spec);
  };
  auto mu_weight = [&](double mu) {
    return integrate_halfline(
        [&](double sigma) { return posterior_slice(mu, sigma); }, sigma_spec);
  };
  const double z = integrate_real(mu_weight, mu_spec);
  const double m1 =
      integrate_real([&](double mu) { return mu * mu_weight(mu); }, mu_spec);
  const double quad_mean = m1 / z;

  const auto chain = run_chain(spec, quick_config(100000, 5000, 2, 1234));
  const std::vector<double> mu_draws = chain.parameter(0);
  double mean = 0.0;
  for (double v : mu_draws) mean += v;
  mean /= static_cast<double>(mu_draws.size());

  // Batch-means Monte Carlo standard error.
  const std::size_t batches = 100;
  const std::size_t per = mu_draws.size() / batches;
  std::vector<double> bm(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < per; ++i) bm[b] += mu_draws[b * per + i];
    bm[b] /= static_cast<double>(per);
  }
  double bvar = 0.0;
  for (double v : bm) bvar += (v - mean) * (v - mean);
  bvar /= static_cast<double>(batches - 1);
  const double mcse = std::sqrt(bvar / static_cast<double>(batches));

  CHECK(std::fabs(mean - quad_mean) < 3.0 * mcse);
}
