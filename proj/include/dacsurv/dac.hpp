#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dacsurv/mple.hpp"

namespace dacsurv {

// Result of the iterated one-step divide-and-conquer approximation to the
// full-sample maximum partial likelihood estimator.
struct DacUnpenalized {
  Eigen::VectorXd beta_tilde;               // final iterate
  Eigen::MatrixXd info_dac;                 // shard-averaged information at beta_tilde
  std::vector<Eigen::VectorXd> iterate_history;  // iterates 0..n_iter
  int k_shards = 0;
  int n_iter = 0;
  std::int64_t n0 = 0;
  std::int64_t d0 = 0;
};

struct OneStepResult {
  Eigen::VectorXd beta_next;
  Eigen::MatrixXd info_dac;  // shard-averaged information at the input beta
};

// Materializes all shards once; reused across one-step rounds.
std::vector<SurvivalDataset> materialize_shards(const SurvivalDataset& dataset,
                                                const ShardPlan& plan);

// Per-shard score/information at beta, computed by up to n_threads workers.
// Results land in fixed shard-index slots and the reduction is a sequential
// fixed-order sum, so outputs are bitwise independent of thread count.
std::vector<PLDerivatives> shard_derivatives(const std::vector<SurvivalDataset>& shards,
                                             const Eigen::VectorXd& beta,
                                             DerivOrder order, int n_threads = 0);

// One round of the averaged one-step update: with pooled information
// A = K^-1 sum_k A_k and averaged score U = K^-1 sum_k U_k, returns
// beta_next = beta + A^-1 U.
OneStepResult dac_onestep_round(const std::vector<SurvivalDataset>& shards,
                                const Eigen::VectorXd& beta, int n_threads = 0);
OneStepResult dac_onestep_round(const SurvivalDataset& dataset, const ShardPlan& plan,
                                const Eigen::VectorXd& beta, int n_threads = 0);

// Steps (i)-(ii): maximum PL estimate on shard 1, then n_iter one-step
// rounds over all shards; info_dac is re-evaluated at the final iterate.
// Per-stage wall-clock seconds are appended to *timings when given.
struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

DacUnpenalized fit_dac_unpenalized(const SurvivalDataset& dataset,
                                   const ShardPlan& plan, int n_iter = 2,
                                   const NewtonConfig& newton = {}, int n_threads = 0,
                                   std::vector<StageTiming>* timings = nullptr);

}  // namespace dacsurv
