#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dacsurv/lsa.hpp"

namespace dacsurv {

// Oracle-property standard errors and normal confidence intervals for the
// active coordinates: Var = (info restricted to active)^{-1} / n0.
struct OracleInference {
  Eigen::VectorXd se;        // one entry per active coordinate
  Eigen::VectorXd ci_lower;
  Eigen::VectorXd ci_upper;
};

OracleInference oracle_se(const Eigen::MatrixXd& info_dac,
                          const std::vector<int>& active,
                          const Eigen::VectorXd& beta_hat, std::int64_t n0,
                          double alpha);

// Full fit output: penalized estimate, selected active set, inference for the
// active coordinates and the lambda path it came from.
struct DacFitResult {
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd beta_tilde;
  std::vector<int> active_set;
  Eigen::VectorXd se, ci_lower, ci_upper;  // aligned with active_set
  double lambda_selected = 0.0;
  PathResult path;
  std::vector<StageTiming> timings;
  int k_shards = 1;
  int iterations = 0;
  std::int64_t n0 = 0;
  std::int64_t d0 = 0;
  double gamma = 1.0;
  double alpha = 0.05;
};

struct PipelineConfig {
  int k_shards = 10;
  int iterations = 2;
  double gamma = 1.0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int n_threads = 0;  // 0 = hardware concurrency
  NewtonConfig newton;
  PathConfig path;
};

// The three-step pipeline: shard-1 MPLE, iterated one-step rounds over all
// shards, then the adaptive-lasso surrogate with BIC tuning and oracle SEs.
DacFitResult fit_dac_pipeline(const SurvivalDataset& dataset,
                              const PipelineConfig& config);

// Reference estimator for moderate n0: maximum PL fit on the full data
// followed by the same penalized surrogate. Equals the pipeline with a
// single shard up to solver tolerances.
DacFitResult fit_full_adaptive_lasso_oracle(const SurvivalDataset& dataset,
                                            const PipelineConfig& config);

}  // namespace dacsurv
