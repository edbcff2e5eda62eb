#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dacsurv/data_model.hpp"

namespace dacsurv {

// Simulation scenarios: I-III are time-independent with coefficient patterns
// of decreasing signal strength; IV has piecewise-constant time-dependent
// covariates over the intervals [0,1), [1,2), [2,3), [3,inf) with
// administrative censoring at 4.
enum class Scenario { I, II, III, IV };

Scenario scenario_from_string(const std::string& name);
std::string to_string(Scenario scenario);

struct ScenarioConfig {
  Scenario scenario = Scenario::I;
  std::int64_t n0 = 0;  // subjects
  int p = 0;            // scenarios I-III
  int p_ind = 0;        // scenario IV: time-independent block
  int p_dep = 0;        // scenario IV: time-dependent block
  double v = 0.2;       // equicorrelation of the covariates
  std::uint64_t seed = 0;
};

struct TrueBeta {
  Eigen::VectorXd values;
  std::vector<int> active_set;
};

TrueBeta true_beta(Scenario scenario, int p);                // I, II, III
TrueBeta true_beta_time_dependent(int p_ind, int p_dep);     // IV
TrueBeta true_beta(const ScenarioConfig& config);

// Weibull(shape 2) event times with conditional scale {0.5 exp(b'Z)}^{-1/2},
// exponential censoring with rate exp(0.5), covariates N(0, (1-v)I + v 11').
// One subject per row, start = 0. beta_override replaces the scenario's
// coefficient pattern (used by null-effect tests).
SurvivalDataset gen_time_independent(
    const ScenarioConfig& config,
    const std::optional<Eigen::VectorXd>& beta_override = std::nullopt);

// Scenario IV: latent (Z_ind, Z_dep(R1..R4)) jointly equicorrelated; the
// hazard on interval R_m uses (Z_ind, Z_dep(R_m)) with cumulative hazard
// increments 0.05 exp(b'Z(t)) t^2, inverted against an exponential draw.
// Output is one start-stop row per interval entered.
SurvivalDataset gen_time_dependent(
    const ScenarioConfig& config,
    const std::optional<Eigen::VectorXd>& beta_override = std::nullopt);

SurvivalDataset generate(const ScenarioConfig& config);

inline double censoring_fraction(const SurvivalDataset& dataset) {
  return 1.0 - static_cast<double>(dataset.d0()) /
                   static_cast<double>(dataset.n_subjects());
}

// Quadratic form d' V d for the scenario covariance V = (1-v)I + v 11';
// this is the GMSE of an estimate with d = beta_hat - beta_0.
inline double equicorr_gmse(const Eigen::VectorXd& diff, double v) {
  const double s = diff.sum();
  return (1.0 - v) * diff.squaredNorm() + v * s * s;
}

}  // namespace dacsurv
