#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "skewtv/priors.hpp"
#include "skewtv/skew_symmetric.hpp"

namespace skewtv {

/// Monte Carlo frequentist-property study: replicate data generation,
/// posterior sampling under each prior, and aggregation into the coverage /
/// quantile / Bayes-factor table layout.
struct StudyConfig {
  SkewFamily family = SkewFamily::SkewNormal;
  double dof = 0.0;
  double true_mu = 0.0;
  double true_sigma = 1.0;
  double true_lambda = 0.0;
  std::size_t sample_size = 50;
  std::size_t replications = 1000;
  std::vector<LambdaPrior> priors;
  std::size_t retained = 1000;
  std::size_t burn_in = 2000;
  std::size_t thin = 5;
  double level = 0.95;
  std::uint64_t base_seed = 0;
  unsigned threads = 0;  // 0 means hardware concurrency

  void validate() const;
};

struct ParameterSummary {
  std::array<double, 3> map_quantiles{};     // 5%, 50%, 95% of MAP estimates
  std::array<double, 3> median_quantiles{};  // same for posterior medians
  double coverage = 0.0;                     // credible intervals covering truth
};

struct PriorStudyResult {
  std::string prior_name;
  std::array<ParameterSummary, 3> parameters;  // mu, sigma, lambda
  double median_bf = 0.0;                      // Savage-Dickey BF01 (lambda)
};

struct StudyReport {
  std::string family_name;
  std::array<double, 3> truth{};  // mu, sigma, lambda
  std::size_t sample_size = 0;
  std::size_t replications = 0;
  std::size_t failed_replications = 0;
  std::uint64_t base_seed = 0;
  double level = 0.95;
  std::vector<PriorStudyResult> priors;
  double wall_clock_seconds = 0.0;  // diagnostics only; never serialized
};

/// Deterministic given base_seed; replication k draws its data from stream
/// k*(P+1) and the chain for prior j from stream k*(P+1)+j+1 (P = number of
/// priors), so the output is independent of the thread count.
StudyReport run_study(const StudyConfig& config);

enum class TableFormat { Csv, Json };

/// Render the report as a table, rows prior x parameter, numbers at three
/// decimals (Bayes factors with three significant digits).
std::string emit_table(const StudyReport& report, TableFormat format);

}  // namespace skewtv
