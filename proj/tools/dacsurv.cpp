// Command-line front end: simulate survival datasets, fit sparse Cox models
// by divide-and-conquer or on the full sample, and run benchmark sweeps.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include <CLI11.hpp>
#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <string>

#include "dacsurv/bench.hpp"
#include "dacsurv/report.hpp"

namespace {

std::atomic<bool> g_interrupt{false};

void handle_sigint(int) { g_interrupt.store(true); }

std::string manifest_path(const std::string& csv_path) {
  const auto dot = csv_path.rfind('.');
  const auto slash = csv_path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return csv_path + ".json";
  return csv_path.substr(0, dot) + ".json";
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

dacsurv::ScenarioConfig make_scenario_config(const std::string& scenario_str,
                                             long long n0, int p, int p_ind,
                                             int p_dep, double v,
                                             unsigned long long seed) {
  dacsurv::ScenarioConfig config;
  config.scenario = dacsurv::scenario_from_string(scenario_str);
  config.n0 = n0;
  config.v = v;
  config.seed = seed;
  if (config.scenario == dacsurv::Scenario::IV) {
    config.p_ind = p_ind;
    config.p_dep = p_dep;
  } else {
    if (p <= 0) throw UsageError("--p is required for scenarios I, II and III");
    config.p = p;
  }
  return config;
}

int cmd_simulate(const dacsurv::ScenarioConfig& config, const std::string& out) {
  const dacsurv::TrueBeta truth = dacsurv::true_beta(config);
  const dacsurv::SurvivalDataset dataset = dacsurv::generate(config);
  dacsurv::write_dataset_csv(dataset, out);
  dacsurv::write_json_file(dacsurv::simulation_manifest(config, truth, dataset, out),
                           manifest_path(out));
  std::printf("wrote %s (%lld rows, %lld subjects, %lld events) and %s\n",
              out.c_str(), static_cast<long long>(dataset.n_rows()),
              static_cast<long long>(dataset.n_subjects()),
              static_cast<long long>(dataset.d0()), manifest_path(out).c_str());
  return 0;
}

int cmd_fit(const std::string& data_path, const std::string& estimator,
            const dacsurv::PipelineConfig& pipeline, const std::string& out) {
  const dacsurv::SurvivalDataset dataset = dacsurv::read_dataset_csv(data_path);
  const dacsurv::DacFitResult result =
      estimator == "dac" ? dacsurv::fit_dac_pipeline(dataset, pipeline)
                         : dacsurv::fit_full_adaptive_lasso_oracle(dataset, pipeline);
  dacsurv::write_json_file(
      dacsurv::fit_result_to_json(result, estimator, pipeline.seed,
                                  pipeline.n_threads),
      out);
  std::printf("wrote %s (active set size %zu, lambda %.6g)\n", out.c_str(),
              result.active_set.size(), result.lambda_selected);
  return 0;
}

int cmd_bench(const dacsurv::BenchConfig& config, const std::string& out,
              const std::string& table_path) {
  std::signal(SIGINT, handle_sigint);
  const dacsurv::BenchReport report = dacsurv::run_bench(config, &g_interrupt);
  dacsurv::write_json_file(dacsurv::bench_to_json(report), out);
  const std::string table = dacsurv::bench_table_text(report);
  std::fputs(table.c_str(), stdout);
  if (!table_path.empty()) {
    std::ofstream table_out(table_path, std::ios::binary);
    if (!table_out) throw dacsurv::DataError("cannot write table file: " + table_path);
    table_out << table;
  }
  if (report.interrupted)
    std::fprintf(stderr, "interrupted: flushed %d completed replicates\n",
                 report.completed_replicates);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divide-and-conquer sparse Cox proportional hazards regression"};
  app.require_subcommand(1);

  // simulate
  std::string scenario_str, sim_out;
  long long n0 = 0;
  int p = 0, p_ind = 50, p_dep = 50;
  double v = 0.2;
  unsigned long long seed = 0;
  auto* sim = app.add_subcommand("simulate", "Generate a simulated survival dataset");
  sim->add_option("--scenario", scenario_str, "Scenario: I, II, III or IV")->required();
  sim->add_option("--n0", n0, "Number of subjects")->required();
  sim->add_option("--p", p, "Covariate dimension (scenarios I-III)");
  sim->add_option("--p-ind", p_ind, "Time-independent block size (scenario IV)");
  sim->add_option("--p-dep", p_dep, "Time-dependent block size (scenario IV)");
  sim->add_option("--v", v, "Equicorrelation of the covariates");
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--out", sim_out, "Output CSV path (manifest goes next to it)")
      ->required();

  // fit
  std::string data_path, estimator = "dac", fit_out;
  dacsurv::PipelineConfig pipeline;
  unsigned long long fit_seed = 0;
  auto* fit = app.add_subcommand("fit", "Fit a sparse Cox model to a CSV dataset");
  fit->add_option("--data", data_path, "Input CSV")->required();
  fit->add_option("--k-shards", pipeline.k_shards, "Number of subsets K");
  fit->add_option("--iterations", pipeline.iterations, "One-step rounds");
  fit->add_option("--gamma", pipeline.gamma, "Adaptive weight exponent");
  fit->add_option("--alpha", pipeline.alpha, "CI level is 1 - alpha");
  fit->add_option("--threads", pipeline.n_threads, "Worker threads (0 = all)");
  fit->add_option("--seed", fit_seed, "Shard plan seed");
  fit->add_option("--estimator", estimator, "dac or full")
      ->check(CLI::IsMember({"dac", "full"}));
  fit->add_option("--n-lambda", pipeline.path.n_lambda, "Lambda grid size");
  fit->add_option("--lambda-min-ratio", pipeline.path.lambda_min_ratio,
                  "Smallest lambda relative to lambda_max");
  fit->add_option("--out", fit_out, "Output JSON path")->required();

  // bench
  dacsurv::BenchConfig bench;
  std::string bench_scenario, bench_out, bench_table, estimators_csv = "dac_i2,full";
  long long bench_n0 = 0;
  int bench_p = 0, bench_p_ind = 50, bench_p_dep = 50;
  double bench_v = 0.2;
  unsigned long long bench_seed = 0;
  auto* bn = app.add_subcommand("bench", "Replicated simulate+fit benchmark sweep");
  bn->add_option("--scenario", bench_scenario, "Scenario: I, II, III or IV")->required();
  bn->add_option("--n0", bench_n0, "Subjects per replicate")->required();
  bn->add_option("--p", bench_p, "Covariate dimension (scenarios I-III)");
  bn->add_option("--p-ind", bench_p_ind, "Scenario IV block size");
  bn->add_option("--p-dep", bench_p_dep, "Scenario IV block size");
  bn->add_option("--v", bench_v, "Equicorrelation");
  bn->add_option("--k-shards", bench.k_shards, "Number of subsets K");
  bn->add_option("--replicates", bench.replicates, "Monte Carlo replicates");
  bn->add_option("--seed", bench_seed, "Base seed; replicate streams derive from it");
  bn->add_option("--estimators", estimators_csv,
                 "Comma list of dac_iN, full, full_lin");
  bn->add_option("--threads", bench.n_threads, "Worker threads within a fit");
  bn->add_option("--parallel-reps", bench.parallel_reps,
                 "Run replicates concurrently");
  bn->add_option("--gamma", bench.gamma, "Adaptive weight exponent");
  bn->add_option("--alpha", bench.alpha, "CI level is 1 - alpha");
  bn->add_option("--out", bench_out, "Output JSON path")->required();
  bn->add_option("--table", bench_table, "Also write the text table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(
          make_scenario_config(scenario_str, n0, p, p_ind, p_dep, v, seed), sim_out);
    if (fit->parsed()) {
      pipeline.seed = fit_seed;
      return cmd_fit(data_path, estimator, pipeline, fit_out);
    }
    bench.scenario = make_scenario_config(bench_scenario, bench_n0, bench_p,
                                          bench_p_ind, bench_p_dep, bench_v,
                                          bench_seed);
    bench.estimators.clear();
    std::string token;
    for (char c : estimators_csv + ",") {
      if (c == ',') {
        if (!token.empty()) bench.estimators.push_back(token);
        token.clear();
      } else {
        token.push_back(c);
      }
    }
    return cmd_bench(bench, bench_out, bench_table);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const dacsurv::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const dacsurv::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
