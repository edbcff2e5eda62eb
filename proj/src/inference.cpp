#include "dacsurv/inference.hpp"

#include <chrono>
#include <cmath>

#include "dacsurv/common.hpp"
#include "dacsurv/stats.hpp"

namespace dacsurv {

OracleInference oracle_se(const Eigen::MatrixXd& info_dac,
                          const std::vector<int>& active,
                          const Eigen::VectorXd& beta_hat, std::int64_t n0,
                          double alpha) {
  if (active.empty()) throw DataError("oracle_se: active set is empty");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("oracle_se: alpha must be in (0,1)");

  const auto m = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd restricted(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      restricted(r, c) = info_dac(active[r], active[c]);

  Eigen::LLT<Eigen::MatrixXd> llt(restricted);
  if (llt.info() != Eigen::Success)
    throw NumericalError("oracle_se: singular active-restricted information");
  const Eigen::MatrixXd cov =
      llt.solve(Eigen::MatrixXd::Identity(m, m)) / static_cast<double>(n0);

  OracleInference out;
  out.se = cov.diagonal().cwiseSqrt();
  const double z = normal_quantile(1.0 - alpha / 2.0);
  out.ci_lower.resize(m);
  out.ci_upper.resize(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double estimate = beta_hat[active[r]];
    out.ci_lower[r] = estimate - z * out.se[r];
    out.ci_upper[r] = estimate + z * out.se[r];
  }
  return out;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point& mark) {
  const auto now = std::chrono::steady_clock::now();
  const double s = std::chrono::duration<double>(now - mark).count();
  mark = now;
  return s;
}

// Step (iii) plus tuning and inference, shared by the DAC pipeline and the
// full-sample oracle.
void penalized_stage(DacFitResult& result, const Eigen::MatrixXd& info,
                     const PipelineConfig& config) {
  auto mark = std::chrono::steady_clock::now();

  const LsaProblem problem =
      build_lsa_problem(result.beta_tilde, info, result.n0, result.d0, config.gamma);
  result.path = fit_lsa_path(problem, config.path);
  result.timings.push_back({"step_iii", seconds_since(mark)});

  result.lambda_selected = result.path.lambdas[result.path.selected_index];
  result.beta_hat = result.path.betas[result.path.selected_index];
  result.active_set.clear();
  for (Eigen::Index j = 0; j < result.beta_hat.size(); ++j)
    if (result.beta_hat[j] != 0.0) result.active_set.push_back(static_cast<int>(j));

  if (!result.active_set.empty()) {
    const OracleInference inference =
        oracle_se(info, result.active_set, result.beta_hat, result.n0, config.alpha);
    result.se = inference.se;
    result.ci_lower = inference.ci_lower;
    result.ci_upper = inference.ci_upper;
  } else {
    result.se.resize(0);
    result.ci_lower.resize(0);
    result.ci_upper.resize(0);
  }
  result.timings.push_back({"tuning", seconds_since(mark)});
}

}  // namespace

DacFitResult fit_dac_pipeline(const SurvivalDataset& dataset,
                              const PipelineConfig& config) {
  DacFitResult result;
  result.k_shards = config.k_shards;
  result.iterations = config.iterations;
  result.n0 = dataset.n_subjects();
  result.d0 = dataset.d0();
  result.gamma = config.gamma;
  result.alpha = config.alpha;

  const ShardPlan plan = make_shard_plan(dataset, config.k_shards, config.seed);
  const DacUnpenalized dac =
      fit_dac_unpenalized(dataset, plan, config.iterations, config.newton,
                          config.n_threads, &result.timings);
  result.beta_tilde = dac.beta_tilde;

  penalized_stage(result, dac.info_dac, config);
  return result;
}

DacFitResult fit_full_adaptive_lasso_oracle(const SurvivalDataset& dataset,
                                            const PipelineConfig& config) {
  DacFitResult result;
  result.k_shards = 1;
  result.n0 = dataset.n_subjects();
  result.d0 = dataset.d0();
  result.gamma = config.gamma;
  result.alpha = config.alpha;

  auto mark = std::chrono::steady_clock::now();
  const MpleFit mple = fit_mple(dataset, config.newton);
  result.beta_tilde = mple.beta;
  result.iterations = mple.iterations;
  result.timings.push_back({"step_i", seconds_since(mark)});

  penalized_stage(result, mple.derivs.info, config);
  return result;
}

}  // namespace dacsurv
