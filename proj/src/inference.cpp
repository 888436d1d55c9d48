#include "skewtv/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include "skewtv/errors.hpp"
#include "skewtv/rng.hpp"
#include "skewtv/special.hpp"

namespace skewtv {

double quantile_type7(std::span<const double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("quantile: p must lie in [0,1]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  const double frac = h - static_cast<double>(lo);
  // Guard against inf - inf when bootstrap fits report unbounded estimates.
  if (frac == 0.0 || v[lo + 1] == v[lo]) return v[lo];
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

Interval credible_interval(std::span<const double> draws, double level) {
  if (draws.empty())
    throw std::invalid_argument("credible_interval: empty chain");
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("credible_interval: level must lie in (0,1)");
  const double tail = 0.5 * (1.0 - level);
  return Interval{quantile_type7(draws, tail), quantile_type7(draws, 1.0 - tail)};
}

PosteriorChain::Draw map_estimate(const PosteriorChain& chain) {
  if (chain.draws.empty() || chain.log_post.size() != chain.draws.size())
    throw std::invalid_argument("map_estimate: empty or inconsistent chain");
  std::size_t best = 0;
  for (std::size_t i = 1; i < chain.log_post.size(); ++i)
    if (chain.log_post[i] > chain.log_post[best]) best = i;
  return chain.draws[best];
}

double savage_dickey_bf(std::span<const double> lambda_draws,
                        const LambdaPrior& prior) {
  if (lambda_draws.empty())
    throw std::invalid_argument("savage_dickey_bf: empty chain");
  const double m = static_cast<double>(lambda_draws.size());

  double mean = 0.0;
  for (double v : lambda_draws) mean += v;
  mean /= m;
  double ss = 0.0;
  for (double v : lambda_draws) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / std::fmax(m - 1.0, 1.0));
  const double iqr = quantile_type7(lambda_draws, 0.75) -
                     quantile_type7(lambda_draws, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::fmin(sd, iqr / 1.34);
  const double bw = 0.9 * spread * std::pow(m, -0.2);
  if (!(bw > 0.0) || !std::isfinite(bw))
    throw std::invalid_argument("savage_dickey_bf: degenerate chain (no spread)");

  const double prior0 = prior.density(0.0);
  if (!(prior0 > 0.0) || !std::isfinite(prior0))
    throw std::invalid_argument(
        "savage_dickey_bf: prior density at 0 must be positive and finite");

  double kde0 = 0.0;
  for (double v : lambda_draws) kde0 += special::norm_pdf(v / bw);
  kde0 /= m * bw;
  return kde0 / prior0;
}

bool MleResult::lambda_unbounded() const { return std::fabs(lambda) > 1e4; }

double MleResult::lambda_reported() const {
  return lambda_unbounded()
             ? std::copysign(std::numeric_limits<double>::infinity(), lambda)
             : lambda;
}

namespace {

// Standard Nelder-Mead simplex. Returns the best point; f is minimized.
struct SimplexResult {
  std::vector<double> x;
  double f;
  bool converged;
};

SimplexResult nelder_mead_once(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, const std::vector<double>& step) {
  const std::size_t dim = start.size();
  constexpr int kMaxEvals = 4000;
  constexpr double kFtol = 1e-11;

  std::vector<std::vector<double>> pts(dim + 1, start);
  std::vector<double> fv(dim + 1);
  fv[0] = f(start);
  int evals = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    pts[i + 1][i] += step[i];
    fv[i + 1] = f(pts[i + 1]);
    ++evals;
  }

  auto order = [&] {
    for (std::size_t i = 0; i <= dim; ++i)
      for (std::size_t j = i + 1; j <= dim; ++j)
        if (fv[j] < fv[i]) {
          std::swap(fv[i], fv[j]);
          std::swap(pts[i], pts[j]);
        }
  };

  bool converged = false;
  while (evals < kMaxEvals) {
    order();
    const double spread = std::fabs(fv[dim] - fv[0]);
    if (spread <= kFtol * (std::fabs(fv[0]) + kFtol)) {
      converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t d = 0; d < dim; ++d)
        centroid[d] += pts[i][d] / static_cast<double>(dim);

    auto blend = [&](double coef) {
      std::vector<double> p(dim);
      for (std::size_t d = 0; d < dim; ++d)
        p[d] = centroid[d] + coef * (pts[dim][d] - centroid[d]);
      return p;
    };

    const auto refl = blend(-1.0);
    const double frefl = f(refl);
    ++evals;
    if (frefl < fv[0]) {
      const auto expa = blend(-2.0);
      const double fexpa = f(expa);
      ++evals;
      if (fexpa < frefl) {
        pts[dim] = expa;
        fv[dim] = fexpa;
      } else {
        pts[dim] = refl;
        fv[dim] = frefl;
      }
    } else if (frefl < fv[dim - 1]) {
      pts[dim] = refl;
      fv[dim] = frefl;
    } else {
      const auto contr = blend(frefl < fv[dim] ? -0.5 : 0.5);
      const double fcontr = f(contr);
      ++evals;
      if (fcontr < std::fmin(frefl, fv[dim])) {
        pts[dim] = contr;
        fv[dim] = fcontr;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t d = 0; d < dim; ++d)
            pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
          fv[i] = f(pts[i]);
          ++evals;
        }
      }
    }
  }
  order();
  return {pts[0], fv[0], converged};
}

// Restarting the simplex at the found point with shrunken steps guards
// against premature collapse on flat likelihood ridges.
SimplexResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, std::vector<double> step) {
  SimplexResult best = nelder_mead_once(f, std::move(start), step);
  for (int round = 1; round < 4; ++round) {
    for (double& s : step) s *= 0.25;
    const SimplexResult next = nelder_mead_once(f, best.x, step);
    const bool improved = next.f < best.f - 1e-12 * (std::fabs(best.f) + 1.0);
    if (next.f < best.f) best = next;
    if (!improved) break;
  }
  return best;
}

double neg_log_lik(SkewFamily family, double dof, std::span<const double> data,
                   double mu, double log_sigma, double lambda) {
  const double sigma = std::exp(log_sigma);
  if (!std::isfinite(mu) || !std::isfinite(lambda) || !std::isfinite(sigma) ||
      sigma <= 0.0)
    return std::numeric_limits<double>::infinity();
  const SkewSymmetricModel model =
      SkewSymmetricModel::preset(family, mu, sigma, lambda, dof);
  double ll = 0.0;
  for (double x : data) ll += model.log_pdf(x);
  return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
}

double sample_median(std::span<const double> data) {
  return quantile_type7(data, 0.5);
}

}  // namespace

MleResult mle_fit(SkewFamily family, std::span<const double> data, double dof,
                  std::optional<double> fixed_lambda) {
  if (data.size() < 3) throw FitError("mle_fit: need at least 3 observations");
  const double first = data.front();
  bool all_equal = true;
  for (double v : data)
    if (v != first) {
      all_equal = false;
      break;
    }
  if (all_equal) throw FitError("mle_fit: degenerate data (all values equal)");

  const double med = sample_median(data);
  std::vector<double> dev(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) dev[i] = std::fabs(data[i] - med);
  double scale0 = 1.4826 * sample_median(dev);
  if (!(scale0 > 0.0)) {
    double mean = 0.0;
    for (double v : data) mean += v;
    mean /= static_cast<double>(data.size());
    double ss = 0.0;
    for (double v : data) ss += (v - mean) * (v - mean);
    scale0 = std::sqrt(ss / static_cast<double>(data.size() - 1));
  }

  bool any = false;
  SimplexResult best{};
  if (fixed_lambda) {
    auto objective = [&](const std::vector<double>& p) {
      return neg_log_lik(family, dof, data, p[0], p[1], *fixed_lambda);
    };
    const SimplexResult r = nelder_mead(objective, {med, std::log(scale0)},
                                        {0.5 * scale0, 0.25});
    if (r.converged && std::isfinite(r.f)) {
      best = r;
      best.x.push_back(*fixed_lambda);
      any = true;
    }
  } else {
    auto objective = [&](const std::vector<double>& p) {
      return neg_log_lik(family, dof, data, p[0], p[1], p[2]);
    };
    for (double lambda0 : {-2.0, 0.0, 2.0}) {
      const SimplexResult r = nelder_mead(
          objective, {med, std::log(scale0), lambda0}, {0.5 * scale0, 0.25, 0.5});
      if (!r.converged || !std::isfinite(r.f)) continue;
      if (!any || r.f < best.f) {
        best = r;
        any = true;
      }
    }
  }
  if (!any) throw FitError("mle_fit: optimizer failed to converge");
  return MleResult{best.x[0], std::exp(best.x[1]), best.x[2], -best.f};
}

BootstrapResult bootstrap_ci(SkewFamily family, std::span<const double> data,
                             std::size_t resamples, double level,
                             std::uint64_t seed, double dof) {
  if (resamples < 100)
    throw std::invalid_argument("bootstrap_ci: need at least 100 resamples");
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("bootstrap_ci: level must lie in (0,1)");

  const std::size_t n = data.size();
  std::vector<double> mus, sigmas, lambdas;
  mus.reserve(resamples);
  sigmas.reserve(resamples);
  lambdas.reserve(resamples);

  std::vector<double> resample(n);
  for (std::size_t b = 0; b < resamples; ++b) {
    CounterRng rng(stream_seed(seed, b));
    for (std::size_t i = 0; i < n; ++i)
      resample[i] = data[rng.next_u64() % n];
    try {
      const MleResult r = mle_fit(family, resample, dof);
      mus.push_back(r.mu);
      sigmas.push_back(r.sigma);
      lambdas.push_back(r.lambda_reported());
    } catch (const FitError&) {
      // Degenerate resample; skip.
    }
  }
  if (mus.size() < resamples / 2)
    throw FitError("bootstrap_ci: too many resamples failed to fit");

  return BootstrapResult{credible_interval(mus, level),
                         credible_interval(sigmas, level),
                         credible_interval(lambdas, level), mus.size()};
}

}  // namespace skewtv
