#pragma once

#include <json.hpp>
#include <string>

#include "dacsurv/inference.hpp"
#include "dacsurv/simgen.hpp"

namespace dacsurv {

// Machine-readable fit result; estimator_tag is "dac" or "full".
nlohmann::json fit_result_to_json(const DacFitResult& result,
                                  const std::string& estimator_tag,
                                  std::uint64_t seed, int threads);

// Companion manifest written next to a simulated CSV.
nlohmann::json simulation_manifest(const ScenarioConfig& config,
                                   const TrueBeta& truth,
                                   const SurvivalDataset& dataset,
                                   const std::string& csv_file);

nlohmann::json scenario_config_to_json(const ScenarioConfig& config);

void write_json_file(const nlohmann::json& doc, const std::string& path);

}  // namespace dacsurv
