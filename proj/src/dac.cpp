#include "dacsurv/dac.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "dacsurv/common.hpp"

namespace dacsurv {

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>* sink) : sink_(sink) {}

  void mark(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    if (sink_) sink_->push_back({stage, std::chrono::duration<double>(now - last_).count()});
    last_ = now;
  }

 private:
  std::vector<StageTiming>* sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

Eigen::MatrixXd average_info(const std::vector<PLDerivatives>& derivs, int p) {
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p, p);
  for (const auto& d : derivs) info += d.info;
  info /= static_cast<double>(derivs.size());
  return info;
}

Eigen::VectorXd average_score(const std::vector<PLDerivatives>& derivs, int p) {
  Eigen::VectorXd score = Eigen::VectorXd::Zero(p);
  for (const auto& d : derivs) score += d.score;
  score /= static_cast<double>(derivs.size());
  return score;
}

}  // namespace

std::vector<SurvivalDataset> materialize_shards(const SurvivalDataset& dataset,
                                                const ShardPlan& plan) {
  std::vector<SurvivalDataset> shards;
  shards.reserve(plan.k_shards);
  for (int k = 0; k < plan.k_shards; ++k)
    shards.push_back(shard_dataset(dataset, plan, k));
  return shards;
}

std::vector<PLDerivatives> shard_derivatives(const std::vector<SurvivalDataset>& shards,
                                             const Eigen::VectorXd& beta,
                                             DerivOrder order, int n_threads) {
  const auto k_shards = static_cast<int>(shards.size());
  std::vector<PLDerivatives> out(k_shards);
  std::vector<std::exception_ptr> errors(k_shards);

  int workers = n_threads > 0 ? n_threads
                              : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, k_shards));

  auto run_shard = [&](int k) {
    try {
      out[k] = pl_derivatives(shards[k], beta, order);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };

  if (workers == 1) {
    for (int k = 0; k < k_shards; ++k) run_shard(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int k = next.fetch_add(1); k < k_shards; k = next.fetch_add(1))
          run_shard(k);
      });
    for (auto& t : pool) t.join();
  }

  for (int k = 0; k < k_shards; ++k)
    if (errors[k]) std::rethrow_exception(errors[k]);
  return out;
}

OneStepResult dac_onestep_round(const std::vector<SurvivalDataset>& shards,
                                const Eigen::VectorXd& beta, int n_threads) {
  if (shards.empty()) throw DataError("dac_onestep_round: no shards");
  const int p = shards.front().p();

  const auto derivs = shard_derivatives(shards, beta, DerivOrder::hessian, n_threads);
  OneStepResult result;
  result.info_dac = average_info(derivs, p);
  const Eigen::VectorXd score = average_score(derivs, p);

  Eigen::LLT<Eigen::MatrixXd> llt(result.info_dac);
  if (llt.info() != Eigen::Success)
    throw NumericalError("dac_onestep_round: singular pooled information matrix");
  result.beta_next = beta + llt.solve(score);
  return result;
}

OneStepResult dac_onestep_round(const SurvivalDataset& dataset, const ShardPlan& plan,
                                const Eigen::VectorXd& beta, int n_threads) {
  return dac_onestep_round(materialize_shards(dataset, plan), beta, n_threads);
}

DacUnpenalized fit_dac_unpenalized(const SurvivalDataset& dataset,
                                   const ShardPlan& plan, int n_iter,
                                   const NewtonConfig& newton, int n_threads,
                                   std::vector<StageTiming>* timings) {
  if (n_iter < 1) throw DataError("fit_dac_unpenalized: n_iter must be >= 1");

  StageClock clock(timings);
  const auto shards = materialize_shards(dataset, plan);
  clock.mark("sharding");

  DacUnpenalized fit;
  fit.k_shards = plan.k_shards;
  fit.n_iter = n_iter;
  fit.n0 = dataset.n_subjects();
  fit.d0 = dataset.d0();

  const MpleFit initial = fit_mple(shards.front(), newton);
  fit.iterate_history.push_back(initial.beta);
  clock.mark("step_i");

  Eigen::VectorXd beta = initial.beta;
  for (int round = 1; round <= n_iter; ++round) {
    auto step = dac_onestep_round(shards, beta, n_threads);
    beta = std::move(step.beta_next);
    fit.iterate_history.push_back(beta);
    clock.mark("step_ii_round_" + std::to_string(round));
  }
  fit.beta_tilde = beta;

  // Pooled information re-evaluated at the final iterate; this is the matrix
  // the penalized step and the standard errors are built from.
  const auto final_derivs =
      shard_derivatives(shards, fit.beta_tilde, DerivOrder::hessian, n_threads);
  fit.info_dac = average_info(final_derivs, dataset.p());
  if (Eigen::LLT<Eigen::MatrixXd>(fit.info_dac).info() != Eigen::Success)
    throw NumericalError("fit_dac_unpenalized: final pooled information not positive definite");
  clock.mark("step_ii_final_info");

  return fit;
}

}  // namespace dacsurv
