#include "dacsurv/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "dacsurv/common.hpp"
#include "dacsurv/report.hpp"
#include "dacsurv/rng.hpp"

namespace dacsurv {

namespace {

struct EstimatorSpec {
  std::string tag;
  bool is_dac = true;
  int iterations = 2;
};

EstimatorSpec parse_estimator(const std::string& tag) {
  if (tag == "full" || tag == "full_lin") return {tag, false, 0};
  if (tag.rfind("dac_i", 0) == 0 && tag.size() == 6 && tag[5] >= '1' && tag[5] <= '3')
    return {tag, true, tag[5] - '0'};
  throw DataError("unknown estimator tag '" + tag +
                  "' (expected dac_i1, dac_i2, dac_i3, full or full_lin)");
}

// Slim per-replicate record; the full path is not kept.
struct RepOutcome {
  double wall_seconds = 0.0;
  Eigen::VectorXd beta_hat;
  std::vector<int> active_set;
  Eigen::VectorXd ci_lower, ci_upper;
};

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct GroupKey {
  std::string block;
  double value;
  bool operator==(const GroupKey& other) const {
    return block == other.block && value == other.value;
  }
};

}  // namespace

BenchReport run_bench(const BenchConfig& config, const std::atomic<bool>* interrupt) {
  if (config.replicates < 1) throw DataError("run_bench: replicates must be >= 1");
  if (config.estimators.empty()) throw DataError("run_bench: no estimators requested");
  std::vector<EstimatorSpec> specs;
  for (const auto& tag : config.estimators) specs.push_back(parse_estimator(tag));

  BenchReport report;
  report.config = config;
  report.truth = true_beta(config.scenario);
  const auto p = report.truth.values.size();

  const auto n_estimators = specs.size();
  const auto n_reps = static_cast<std::size_t>(config.replicates);
  std::vector<std::vector<RepOutcome>> outcomes(n_estimators,
                                                std::vector<RepOutcome>(n_reps));
  std::vector<std::uint8_t> done(n_reps, 0);

  auto run_replicate = [&](std::size_t rep) {
    ScenarioConfig scenario = config.scenario;
    scenario.seed = derive_stream(config.scenario.seed, rep).next();
    const SurvivalDataset dataset = generate(scenario);

    for (std::size_t e = 0; e < n_estimators; ++e) {
      PipelineConfig pipeline;
      pipeline.k_shards = config.k_shards;
      pipeline.iterations = specs[e].iterations;
      pipeline.gamma = config.gamma;
      pipeline.alpha = config.alpha;
      pipeline.seed = scenario.seed;
      pipeline.n_threads = config.n_threads;
      pipeline.path = config.path;

      const auto t0 = std::chrono::steady_clock::now();
      const DacFitResult fit = specs[e].is_dac
                                   ? fit_dac_pipeline(dataset, pipeline)
                                   : fit_full_adaptive_lasso_oracle(dataset, pipeline);
      const auto t1 = std::chrono::steady_clock::now();

      RepOutcome& out = outcomes[e][rep];
      out.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
      out.beta_hat = fit.beta_hat;
      out.active_set = fit.active_set;
      out.ci_lower = fit.ci_lower;
      out.ci_upper = fit.ci_upper;
    }
    done[rep] = 1;
  };

  if (config.parallel_reps <= 1) {
    for (std::size_t rep = 0; rep < n_reps; ++rep) {
      if (interrupt && interrupt->load()) {
        report.interrupted = true;
        break;
      }
      run_replicate(rep);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> interrupted{false};
    std::vector<std::exception_ptr> errors(n_reps);
    const int workers =
        std::min<int>(config.parallel_reps, static_cast<int>(n_reps));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t rep = next.fetch_add(1); rep < n_reps;
             rep = next.fetch_add(1)) {
          if (interrupt && interrupt->load()) {
            interrupted = true;
            return;
          }
          try {
            run_replicate(rep);
          } catch (...) {
            errors[rep] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
    report.interrupted = interrupted.load();
    for (std::size_t rep = 0; rep < n_reps; ++rep)
      if (errors[rep]) std::rethrow_exception(errors[rep]);
  }

  std::vector<std::size_t> completed;
  for (std::size_t rep = 0; rep < n_reps; ++rep)
    if (done[rep]) completed.push_back(rep);
  report.completed_replicates = static_cast<int>(completed.size());
  if (completed.empty()) return report;

  // Coordinate groups in pattern order; scenario IV keeps the two blocks apart.
  const int p_ind = config.scenario.scenario == Scenario::IV ? config.scenario.p_ind : 0;
  std::vector<GroupKey> coord_group(p);
  std::vector<GroupKey> group_order;
  for (Eigen::Index j = 0; j < p; ++j) {
    GroupKey key{config.scenario.scenario == Scenario::IV
                     ? (j < p_ind ? "ind" : "dep")
                     : "",
                 report.truth.values[j]};
    coord_group[j] = key;
    if (std::find(group_order.begin(), group_order.end(), key) == group_order.end())
      group_order.push_back(key);
  }

  for (std::size_t e = 0; e < n_estimators; ++e) {
    EstimatorBench bench;
    bench.tag = specs[e].tag;
    for (std::size_t rep : completed) {
      const RepOutcome& out = outcomes[e][rep];
      bench.rep_wall_seconds.push_back(out.wall_seconds);
      bench.rep_gmse.push_back(
          equicorr_gmse(out.beta_hat - report.truth.values, config.scenario.v));
    }
    bench.wall_seconds_median = median(bench.rep_wall_seconds);
    bench.gmse_mean = 0.0;
    for (double g : bench.rep_gmse) bench.gmse_mean += g;
    bench.gmse_mean /= static_cast<double>(bench.rep_gmse.size());

    for (const GroupKey& key : group_order) {
      GroupMetrics gm;
      gm.block = key.block;
      gm.value = key.value;
      std::int64_t n_pairs = 0, n_zero = 0, n_covered = 0;
      double bias_sum = 0.0, mse_sum = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (!(coord_group[j] == key)) continue;
        ++gm.n_coords;
        for (std::size_t rep : completed) {
          const RepOutcome& out = outcomes[e][rep];
          const double diff = out.beta_hat[j] - report.truth.values[j];
          ++n_pairs;
          bias_sum += diff;
          mse_sum += diff * diff;
          if (out.beta_hat[j] == 0.0) ++n_zero;
          const auto it = std::lower_bound(out.active_set.begin(),
                                           out.active_set.end(), static_cast<int>(j));
          if (it != out.active_set.end() && *it == static_cast<int>(j)) {
            const auto idx = static_cast<Eigen::Index>(it - out.active_set.begin());
            ++gm.coverage_n;
            if (out.ci_lower[idx] <= report.truth.values[j] &&
                report.truth.values[j] <= out.ci_upper[idx])
              ++n_covered;
          }
        }
      }
      gm.bias = bias_sum / static_cast<double>(n_pairs);
      gm.mse = mse_sum / static_cast<double>(n_pairs);
      gm.pct_zero = 100.0 * static_cast<double>(n_zero) / static_cast<double>(n_pairs);
      gm.coverage = gm.coverage_n > 0 ? 100.0 * static_cast<double>(n_covered) /
                                            static_cast<double>(gm.coverage_n)
                                      : std::numeric_limits<double>::quiet_NaN();
      bench.groups.push_back(std::move(gm));
    }
    report.estimators.push_back(std::move(bench));
  }
  return report;
}

nlohmann::json bench_to_json(const BenchReport& report) {
  nlohmann::json config = scenario_config_to_json(report.config.scenario);
  config["k_shards"] = report.config.k_shards;
  config["replicates"] = report.config.replicates;
  config["estimators"] = report.config.estimators;
  config["n_threads"] = report.config.n_threads;
  config["parallel_reps"] = report.config.parallel_reps;
  config["gamma"] = report.config.gamma;
  config["alpha"] = report.config.alpha;
  config["n_lambda"] = report.config.path.n_lambda;
  config["lambda_min_ratio"] = report.config.path.lambda_min_ratio;

  nlohmann::json estimators = nlohmann::json::array();
  for (const auto& bench : report.estimators) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& gm : bench.groups) {
      nlohmann::json g{{"block", gm.block},      {"value", gm.value},
                       {"n_coords", gm.n_coords}, {"bias", gm.bias},
                       {"mse", gm.mse},           {"pct_zero", gm.pct_zero},
                       {"coverage_n", gm.coverage_n}};
      if (gm.coverage_n > 0)
        g["coverage"] = gm.coverage;
      else
        g["coverage"] = nullptr;
      groups.push_back(std::move(g));
    }
    estimators.push_back({{"tag", bench.tag},
                          {"wall_seconds_median", bench.wall_seconds_median},
                          {"gmse_mean", bench.gmse_mean},
                          {"rep_wall_seconds", bench.rep_wall_seconds},
                          {"rep_gmse", bench.rep_gmse},
                          {"groups", std::move(groups)}});
  }

  nlohmann::json truth_beta = nlohmann::json::array();
  for (Eigen::Index j = 0; j < report.truth.values.size(); ++j)
    truth_beta.push_back(report.truth.values[j]);

  return nlohmann::json{
      {"schema_version", kSchemaVersion},
      {"kind", "bench_report"},
      {"config", std::move(config)},
      {"machine",
       {{"hardware_threads", std::thread::hardware_concurrency()},
        {"compiler", __VERSION__}}},
      {"true_beta", std::move(truth_beta)},
      {"true_active_set", report.truth.active_set},
      {"completed_replicates", report.completed_replicates},
      {"interrupted", report.interrupted},
      {"estimators", std::move(estimators)},
  };
}

namespace {

std::string format_cell(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%12.4g", value);
  return buf;
}

}  // namespace

std::string bench_table_text(const BenchReport& report) {
  const auto& cfg = report.config;
  char header[160];
  if (cfg.scenario.scenario == Scenario::IV)
    std::snprintf(header, sizeof(header),
                  "scenario %s  n0=%lld  p_ind=%d  p_dep=%d  v=%g  K=%d  reps=%d\n",
                  to_string(cfg.scenario.scenario).c_str(),
                  static_cast<long long>(cfg.scenario.n0), cfg.scenario.p_ind,
                  cfg.scenario.p_dep, cfg.scenario.v, cfg.k_shards,
                  report.completed_replicates);
  else
    std::snprintf(header, sizeof(header),
                  "scenario %s  n0=%lld  p=%d  v=%g  K=%d  reps=%d\n",
                  to_string(cfg.scenario.scenario).c_str(),
                  static_cast<long long>(cfg.scenario.n0), cfg.scenario.p,
                  cfg.scenario.v, cfg.k_shards, report.completed_replicates);

  std::string out = header;
  auto row_label = [](const std::string& label) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-24s", label.c_str());
    return std::string(buf);
  };

  out += row_label("metric");
  for (const auto& bench : report.estimators) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%12s", bench.tag.c_str());
    out += buf;
  }
  out += "\n";

  out += row_label("time_s_median");
  for (const auto& bench : report.estimators) out += format_cell(bench.wall_seconds_median);
  out += "\n";
  out += row_label("gmse_mean");
  for (const auto& bench : report.estimators) out += format_cell(bench.gmse_mean);
  out += "\n";

  if (report.estimators.empty()) return out;
  const auto n_groups = report.estimators.front().groups.size();
  for (std::size_t g = 0; g < n_groups; ++g) {
    const auto& ref = report.estimators.front().groups[g];
    const std::string prefix =
        ref.block.empty() ? "[" + std::to_string(ref.value).substr(0, 5) + "] "
                          : "[" + ref.block + " " +
                                std::to_string(ref.value).substr(0, 5) + "] ";
    for (const std::string metric : {"pct_zero", "bias", "mse", "covp"}) {
      out += row_label(prefix + metric);
      for (const auto& bench : report.estimators) {
        const auto& gm = bench.groups[g];
        if (metric == "pct_zero") out += format_cell(gm.pct_zero);
        else if (metric == "bias") out += format_cell(gm.bias);
        else if (metric == "mse") out += format_cell(gm.mse);
        else if (gm.coverage_n > 0) out += format_cell(gm.coverage);
        else out += "           -";
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace dacsurv
