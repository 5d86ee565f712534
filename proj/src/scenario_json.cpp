#include "dsentry/scenario_json.hpp"

#include <fstream>

namespace dsentry {

using nlohmann::json;

namespace {

std::vector<Level> levels_from_json(const json& arr, const char* key) {
  if (!arr.is_array()) throw ConfigError(std::string(key) + " must be an array");
  std::vector<Level> out;
  for (const auto& item : arr) {
    out.push_back({item.at("mean").get<double>(), item.at("std").get<double>()});
  }
  return out;
}

json levels_to_json(const std::vector<Level>& levels) {
  json arr = json::array();
  for (const auto& l : levels) arr.push_back({{"mean", l.mean}, {"std", l.std}});
  return arr;
}

}  // namespace

ScenarioConfig scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario document must be an object");
  ScenarioConfig c = default_paper_scenario();
  try {
    if (doc.contains("energy_levels")) c.energy_levels = levels_from_json(doc["energy_levels"], "energy_levels");
    if (doc.contains("power_levels")) c.power_levels = levels_from_json(doc["power_levels"], "power_levels");
    if (doc.contains("pattern_probs")) {
      c.pattern_probs = doc["pattern_probs"].get<std::vector<std::vector<double>>>();
    } else if (doc.contains("energy_levels") || doc.contains("power_levels")) {
      const double p = 1.0 / static_cast<double>(c.energy_levels.size() * c.power_levels.size());
      c.pattern_probs.assign(c.energy_levels.size(), std::vector<double>(c.power_levels.size(), p));
    }
    if (doc.contains("training_length")) c.training_length = doc["training_length"].get<std::size_t>();
    if (doc.contains("test_length")) c.test_length = doc["test_length"].get<std::size_t>();
    if (doc.contains("change_point")) c.change_point = doc["change_point"].get<std::size_t>();
    if (doc.contains("diversion_prob")) c.diversion_prob = doc["diversion_prob"].get<double>();
    if (doc.contains("diversion_energy_add")) c.diversion_energy_add = doc["diversion_energy_add"].get<double>();
    if (doc.contains("diversion_power_add")) c.diversion_power_add = doc["diversion_power_add"].get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  validate(c);
  return c;
}

json scenario_to_json(const ScenarioConfig& config) {
  return {{"energy_levels", levels_to_json(config.energy_levels)},
          {"power_levels", levels_to_json(config.power_levels)},
          {"pattern_probs", config.pattern_probs},
          {"training_length", config.training_length},
          {"test_length", config.test_length},
          {"change_point", config.change_point},
          {"diversion_prob", config.diversion_prob},
          {"diversion_energy_add", config.diversion_energy_add},
          {"diversion_power_add", config.diversion_power_add}};
}

ScenarioConfig read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario '" + path + "': " + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace dsentry
