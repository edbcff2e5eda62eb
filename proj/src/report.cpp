#include "dacsurv/report.hpp"

#include <fstream>

#include "dacsurv/common.hpp"

namespace dacsurv {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

nlohmann::json fit_result_to_json(const DacFitResult& result,
                                  const std::string& estimator_tag,
                                  std::uint64_t seed, int threads) {
  nlohmann::json path;
  path["lambdas"] = result.path.lambdas;
  path["dfs"] = result.path.dfs;
  path["bics"] = result.path.bics;
  path["selected_index"] = result.path.selected_index;
  nlohmann::json betas = nlohmann::json::array();
  for (const auto& b : result.path.betas) betas.push_back(vector_to_json(b));
  path["betas"] = std::move(betas);

  nlohmann::json timings = nlohmann::json::array();
  for (const auto& t : result.timings)
    timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});

  return nlohmann::json{
      {"schema_version", kSchemaVersion},
      {"kind", "fit_result"},
      {"estimator", estimator_tag},
      {"n0", result.n0},
      {"p", result.beta_hat.size()},
      {"d0", result.d0},
      {"k_shards", result.k_shards},
      {"iterations", result.iterations},
      {"gamma", result.gamma},
      {"alpha", result.alpha},
      {"seed", seed},
      {"threads", threads},
      {"lambda_selected", result.lambda_selected},
      {"beta_tilde", vector_to_json(result.beta_tilde)},
      {"beta_hat", vector_to_json(result.beta_hat)},
      {"active_set", result.active_set},
      {"se", vector_to_json(result.se)},
      {"ci_lower", vector_to_json(result.ci_lower)},
      {"ci_upper", vector_to_json(result.ci_upper)},
      {"path", std::move(path)},
      {"timings", std::move(timings)},
  };
}

nlohmann::json scenario_config_to_json(const ScenarioConfig& config) {
  nlohmann::json j{
      {"scenario", to_string(config.scenario)},
      {"n0", config.n0},
      {"v", config.v},
      {"seed", config.seed},
  };
  if (config.scenario == Scenario::IV) {
    j["p_ind"] = config.p_ind;
    j["p_dep"] = config.p_dep;
  } else {
    j["p"] = config.p;
  }
  return j;
}

nlohmann::json simulation_manifest(const ScenarioConfig& config,
                                   const TrueBeta& truth,
                                   const SurvivalDataset& dataset,
                                   const std::string& csv_file) {
  nlohmann::json j = scenario_config_to_json(config);
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "simulation_manifest";
  j["csv"] = csv_file;
  j["rows"] = dataset.n_rows();
  j["n_subjects"] = dataset.n_subjects();
  j["d0"] = dataset.d0();
  j["censoring_fraction"] = censoring_fraction(dataset);
  j["true_beta"] = vector_to_json(truth.values);
  j["true_active_set"] = truth.active_set;
  return j;
}

void write_json_file(const nlohmann::json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write json file: " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw DataError("failed writing json file: " + path);
}

}  // namespace dacsurv
