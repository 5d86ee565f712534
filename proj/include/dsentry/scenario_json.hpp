#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "dsentry/simulator.hpp"

namespace dsentry {

/// Scenario document; keys are the ScenarioConfig field names. Missing keys
/// fall back to default_paper_scenario(). Throws ConfigError on bad values.
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioConfig& config);

ScenarioConfig read_scenario_file(const std::string& path);

}  // namespace dsentry
