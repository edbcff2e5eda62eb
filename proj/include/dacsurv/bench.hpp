#pragma once

#include <atomic>
#include <json.hpp>
#include <string>
#include <vector>

#include "dacsurv/inference.hpp"
#include "dacsurv/simgen.hpp"

namespace dacsurv {

// One benchmark sweep: replicate simulate+fit runs for each requested
// estimator over a single scenario configuration.
struct BenchConfig {
  ScenarioConfig scenario;
  int k_shards = 10;
  int replicates = 10;
  std::vector<std::string> estimators = {"dac_i2", "full"};  // dac_iN | full | full_lin
  int n_threads = 0;
  int parallel_reps = 1;
  double gamma = 1.0;
  double alpha = 0.05;
  PathConfig path;
};

// Aggregates over the coordinates sharing one true coefficient value
// (scenario IV keeps the time-independent and time-dependent blocks apart).
struct GroupMetrics {
  std::string block;  // "" for scenarios I-III, "ind"/"dep" for IV
  double value = 0.0;
  int n_coords = 0;
  double bias = 0.0;      // mean of beta_hat_j - beta_0j
  double mse = 0.0;       // mean of (beta_hat_j - beta_0j)^2
  double pct_zero = 0.0;  // percent of (coord, replicate) pairs estimated 0
  double coverage = 0.0;  // percent of CIs covering beta_0j, among selected
  std::int64_t coverage_n = 0;  // number of CI checks behind coverage
};

struct EstimatorBench {
  std::string tag;
  double wall_seconds_median = 0.0;
  double gmse_mean = 0.0;
  std::vector<double> rep_wall_seconds;
  std::vector<double> rep_gmse;
  std::vector<GroupMetrics> groups;
};

struct BenchReport {
  BenchConfig config;
  TrueBeta truth;
  std::vector<EstimatorBench> estimators;
  int completed_replicates = 0;
  bool interrupted = false;
};

// Runs the sweep; checks *interrupt between replicates and returns the
// partial aggregate when it fires.
BenchReport run_bench(const BenchConfig& config,
                      const std::atomic<bool>* interrupt = nullptr);

nlohmann::json bench_to_json(const BenchReport& report);

// Fixed-width table, estimator columns by metric rows.
std::string bench_table_text(const BenchReport& report);

}  // namespace dacsurv
