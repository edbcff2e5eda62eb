#include <doctest.h>

#include "dacsurv/dac.hpp"
#include "dacsurv/simgen.hpp"
#include "oracles.hpp"

using namespace dacsurv;

namespace {

SurvivalDataset scenario_i_dataset(std::int64_t n0, int p, std::uint64_t seed,
                                   double v = 0.2) {
  ScenarioConfig config;
  config.scenario = Scenario::I;
  config.n0 = n0;
  config.p = p;
  config.v = v;
  config.seed = seed;
  return gen_time_independent(config);
}

}  // namespace

TEST_CASE("single shard round is one exact Newton step") {
  const auto ds = scenario_i_dataset(800, 9, 3);
  const auto plan = make_shard_plan(ds, 1, 0);
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(9, 0.05);

  const auto round = dac_onestep_round(ds, plan, beta);
  const auto derivs = pl_derivatives(ds, beta);
  const Eigen::VectorXd newton =
      beta + Eigen::LLT<Eigen::MatrixXd>(derivs.info).solve(derivs.score);
  CHECK((round.beta_next - newton).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("round implements the collapsed averaged one-step update") {
  const auto ds = scenario_i_dataset(1500, 9, 4);
  const auto plan = make_shard_plan(ds, 6, 11);
  const auto shards = materialize_shards(ds, plan);
  const Eigen::VectorXd beta = Eigen::VectorXd::Zero(9);

  const auto round = dac_onestep_round(shards, beta);

  // Recompute K^-1 sum_k [beta + A^-1 U_k] term by term.
  const auto derivs = shard_derivatives(shards, beta, DerivOrder::hessian, 1);
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(9, 9);
  for (const auto& d : derivs) info += d.info;
  info /= 6.0;
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  Eigen::VectorXd average = Eigen::VectorXd::Zero(9);
  for (const auto& d : derivs) average += beta + llt.solve(d.score);
  average /= 6.0;
  CHECK((round.beta_next - average).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((round.info_dac - info).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a stationary point is a fixed point of the round") {
  const auto ds = scenario_i_dataset(1000, 9, 5);
  const auto fit = fit_mple(ds);
  const auto plan = make_shard_plan(ds, 1, 0);
  const auto round = dac_onestep_round(ds, plan, fit.beta);
  // ||score|| <= 1e-9 at fit.beta, so the Newton correction is O(1e-8).
  CHECK((round.beta_next - fit.beta).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("one-step update contracts toward the full-sample estimator") {
  const auto ds = scenario_i_dataset(20000, 10, 6);
  const auto plan = make_shard_plan(ds, 10, 17);
  const auto shards = materialize_shards(ds, plan);

  const Eigen::VectorXd beta_shard1 = fit_mple(shards[0]).beta;
  const Eigen::VectorXd beta_full = fit_mple(ds).beta;
  const auto round = dac_onestep_round(shards, beta_shard1);

  const double before = (beta_shard1 - beta_full).cwiseAbs().maxCoeff();
  const double after = (round.beta_next - beta_full).cwiseAbs().maxCoeff();
  CHECK(after <= 0.5 * before);
}

TEST_CASE("K=1 pipeline collapses to the full MPLE") {
  const auto ds = scenario_i_dataset(1200, 9, 7);
  const auto plan = make_shard_plan(ds, 1, 0);
  const auto dac = fit_dac_unpenalized(ds, plan, 2);
  const auto mple = fit_mple(ds);

  CHECK(dac.iterate_history.size() == 3);
  CHECK((dac.iterate_history[0] - mple.beta).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((dac.beta_tilde - mple.beta).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(dac.n0 == ds.n_subjects());
  CHECK(dac.d0 == ds.d0());
}

TEST_CASE("history starts at the shard-1 estimate and approaches the full fit") {
  const auto ds = scenario_i_dataset(10000, 9, 8);
  const auto plan = make_shard_plan(ds, 5, 23);
  const auto shards = materialize_shards(ds, plan);
  const auto dac = fit_dac_unpenalized(ds, plan, 3);

  CHECK(dac.iterate_history.size() == 4);
  CHECK((dac.iterate_history[0] - fit_mple(shards[0]).beta).cwiseAbs().maxCoeff() ==
        0.0);

  const Eigen::VectorXd beta_full = fit_mple(ds).beta;
  double previous = (dac.iterate_history[0] - beta_full).norm();
  for (std::size_t i = 1; i < dac.iterate_history.size(); ++i) {
    const double current = (dac.iterate_history[i] - beta_full).norm();
    CHECK(current <= previous + 1e-12);
    previous = current;
  }
}

TEST_CASE("results are bitwise independent of the thread count") {
  const auto ds = scenario_i_dataset(3000, 9, 9);
  const auto plan = make_shard_plan(ds, 7, 31);
  const auto one = fit_dac_unpenalized(ds, plan, 2, {}, 1);
  const auto four = fit_dac_unpenalized(ds, plan, 2, {}, 4);
  CHECK(one.beta_tilde == four.beta_tilde);
  CHECK(one.info_dac == four.info_dac);
}

TEST_CASE("extra iterations leave the GMSE essentially unchanged") {
  double gmse2 = 0.0, gmse3 = 0.0;
  const auto truth = true_beta(Scenario::I, 9).values;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = scenario_i_dataset(10000, 9, 100 + seed);
    const auto plan = make_shard_plan(ds, 10, seed);
    const auto fit3 = fit_dac_unpenalized(ds, plan, 3);
    gmse2 += equicorr_gmse(fit3.iterate_history[2] - truth, 0.2);
    gmse3 += equicorr_gmse(fit3.iterate_history[3] - truth, 0.2);
  }
  CHECK(std::fabs(gmse2 - gmse3) / gmse2 <= 0.01);
}
