#include "skewtv/simstudy.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "skewtv/errors.hpp"
#include "skewtv/inference.hpp"
#include "skewtv/mcmc.hpp"
#include "skewtv/rng.hpp"

#include "json.hpp"

namespace skewtv {

void StudyConfig::validate() const {
  if (replications < 1)
    throw std::domain_error("StudyConfig: replications must be >= 1");
  if (sample_size < 2)
    throw std::domain_error("StudyConfig: sample_size must be >= 2");
  if (retained < 100)
    throw std::domain_error("StudyConfig: retained draws must be >= 100");
  if (priors.empty()) throw std::domain_error("StudyConfig: no priors given");
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("StudyConfig: level must lie in (0,1)");
  if (!(true_sigma > 0.0))
    throw std::domain_error("StudyConfig: true_sigma must be positive");
}

namespace {

struct ReplicationRecord {
  bool failed = false;
  // Indexed [prior][parameter]: parameter order mu, sigma, lambda.
  std::vector<std::array<double, 3>> map_values;
  std::vector<std::array<double, 3>> median_values;
  std::vector<std::array<bool, 3>> covered;
  std::vector<double> bf;
};

ReplicationRecord run_replication(const StudyConfig& cfg, std::size_t k) {
  const std::size_t streams_per_rep = cfg.priors.size() + 1;
  const SkewSymmetricModel truth_model = SkewSymmetricModel::preset(
      cfg.family, cfg.true_mu, cfg.true_sigma, cfg.true_lambda, cfg.dof);
  const std::vector<double> data = truth_model.sample(
      cfg.sample_size, stream_seed(cfg.base_seed, k * streams_per_rep));

  const double truth[3] = {cfg.true_mu, cfg.true_sigma, cfg.true_lambda};

  ReplicationRecord rec;
  ChainConfig chain_cfg;
  chain_cfg.burn_in = cfg.burn_in;
  chain_cfg.thin = cfg.thin;
  chain_cfg.iterations = cfg.burn_in + cfg.retained * cfg.thin;

  for (std::size_t j = 0; j < cfg.priors.size(); ++j) {
    chain_cfg.seed = stream_seed(cfg.base_seed, k * streams_per_rep + j + 1);
    const PosteriorSpec spec =
        PosteriorSpec::for_data(cfg.family, data, cfg.priors[j], cfg.dof);
    const PosteriorChain chain = run_chain(spec, chain_cfg);

    const PosteriorChain::Draw map = map_estimate(chain);
    rec.map_values.push_back({map.mu, map.sigma, map.lambda});

    std::array<double, 3> medians{};
    std::array<bool, 3> covered{};
    for (std::size_t p = 0; p < 3; ++p) {
      const std::vector<double> draws = chain.parameter(p);
      medians[p] = quantile_type7(draws, 0.5);
      covered[p] = credible_interval(draws, cfg.level).contains(truth[p]);
    }
    rec.median_values.push_back(medians);
    rec.covered.push_back(covered);
    rec.bf.push_back(savage_dickey_bf(chain.parameter(2), cfg.priors[j]));
  }
  return rec;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string format_bf(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Prior names such as "BTV(0.5,0.5)" contain commas; quote per RFC 4180.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

StudyReport run_study(const StudyConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<ReplicationRecord> records(cfg.replications);
  std::atomic<std::size_t> next{0};
  unsigned threads = cfg.threads == 0 ? std::thread::hardware_concurrency()
                                      : cfg.threads;
  if (threads == 0) threads = 1;
  threads = std::min<unsigned>(threads, cfg.replications);

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cfg.replications) return;
      try {
        records[k] = run_replication(cfg, k);
      } catch (const ProprietyError&) {
        records[k].failed = true;
      } catch (const InitializationError&) {
        records[k].failed = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  StudyReport report;
  report.family_name = skew_family_name(cfg.family);
  report.truth = {cfg.true_mu, cfg.true_sigma, cfg.true_lambda};
  report.sample_size = cfg.sample_size;
  report.replications = cfg.replications;
  report.base_seed = cfg.base_seed;
  report.level = cfg.level;

  // Deterministic fold in replication order.
  for (std::size_t j = 0; j < cfg.priors.size(); ++j) {
    PriorStudyResult result;
    result.prior_name = cfg.priors[j].name();
    std::array<std::vector<double>, 3> maps, medians;
    std::array<std::size_t, 3> cover_count{};
    std::vector<double> bfs;
    std::size_t used = 0;
    for (std::size_t k = 0; k < cfg.replications; ++k) {
      const ReplicationRecord& rec = records[k];
      if (rec.failed) continue;
      ++used;
      for (std::size_t p = 0; p < 3; ++p) {
        maps[p].push_back(rec.map_values[j][p]);
        medians[p].push_back(rec.median_values[j][p]);
        cover_count[p] += rec.covered[j][p];
      }
      bfs.push_back(rec.bf[j]);
    }
    if (used == 0) throw std::runtime_error("run_study: every replication failed");
    for (std::size_t p = 0; p < 3; ++p) {
      ParameterSummary& s = result.parameters[p];
      for (std::size_t qi = 0; qi < 3; ++qi) {
        const double q = qi == 0 ? 0.05 : (qi == 1 ? 0.5 : 0.95);
        s.map_quantiles[qi] = quantile_type7(maps[p], q);
        s.median_quantiles[qi] = quantile_type7(medians[p], q);
      }
      s.coverage = static_cast<double>(cover_count[p]) / static_cast<double>(used);
    }
    result.median_bf = quantile_type7(bfs, 0.5);
    report.priors.push_back(std::move(result));
  }

  std::size_t failed = 0;
  for (const ReplicationRecord& rec : records) failed += rec.failed;
  report.failed_replications = failed;
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string emit_table(const StudyReport& report, TableFormat format) {
  static const char* kParams[3] = {"mu", "sigma", "lambda"};
  if (format == TableFormat::Csv) {
    std::string out =
        "prior,parameter,map_q05,map_q50,map_q95,median_q05,median_q50,"
        "median_q95,coverage,bf_median\n";
    for (const PriorStudyResult& pr : report.priors) {
      for (std::size_t p = 0; p < 3; ++p) {
        const ParameterSummary& s = pr.parameters[p];
        out += csv_field(pr.prior_name);
        out += ',';
        out += kParams[p];
        for (double q : s.map_quantiles) out += ',' + format_fixed(q, 3);
        for (double q : s.median_quantiles) out += ',' + format_fixed(q, 3);
        out += ',' + format_fixed(s.coverage, 3);
        out += ',';
        if (p == 2) out += format_bf(pr.median_bf);
        out += '\n';
      }
    }
    return out;
  }
  if (format == TableFormat::Json) {
    nlohmann::json doc;
    doc["schema"] = "skewtv.study-report/1";
    doc["family"] = report.family_name;
    doc["truth"] = {{"mu", report.truth[0]},
                    {"sigma", report.truth[1]},
                    {"lambda", report.truth[2]}};
    doc["n"] = report.sample_size;
    doc["replications"] = report.replications;
    doc["failed_replications"] = report.failed_replications;
    doc["seed"] = report.base_seed;
    doc["level"] = report.level;
    doc["rows"] = nlohmann::json::array();
    for (const PriorStudyResult& pr : report.priors) {
      for (std::size_t p = 0; p < 3; ++p) {
        const ParameterSummary& s = pr.parameters[p];
        nlohmann::json row;
        row["prior"] = pr.prior_name;
        row["parameter"] = kParams[p];
        row["map_q05"] = format_fixed(s.map_quantiles[0], 3);
        row["map_q50"] = format_fixed(s.map_quantiles[1], 3);
        row["map_q95"] = format_fixed(s.map_quantiles[2], 3);
        row["median_q05"] = format_fixed(s.median_quantiles[0], 3);
        row["median_q50"] = format_fixed(s.median_quantiles[1], 3);
        row["median_q95"] = format_fixed(s.median_quantiles[2], 3);
        row["coverage"] = format_fixed(s.coverage, 3);
        if (p == 2) row["bf_median"] = format_bf(pr.median_bf);
        doc["rows"].push_back(std::move(row));
      }
    }
    return doc.dump(2) + "\n";
  }
  throw std::invalid_argument("emit_table: unknown format");
}

}  // namespace skewtv
