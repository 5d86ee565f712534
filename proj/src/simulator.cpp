#include "dsentry/simulator.hpp"

#include <cmath>
#include <string>

namespace dsentry {

namespace {

void check_levels(const std::vector<Level>& levels, const char* name) {
  if (levels.empty()) throw ConfigError(std::string(name) + " must not be empty");
  for (const auto& l : levels) {
    if (!(l.mean > 0.0 && l.std > 0.0 && std::isfinite(l.mean) && std::isfinite(l.std))) {
      throw ConfigError(std::string(name) + ": mean and std must be finite and > 0");
    }
  }
}

double positive_normal(RngStream& rng, double mean, double std) {
  double x = rng.normal(mean, std);
  while (!(x > 0.0)) x = rng.normal(mean, std);
  return x;
}

}  // namespace

CustomerPattern ScenarioConfig::pattern(int pattern_id) const {
  const auto np = power_levels.size();
  const auto idx = static_cast<std::size_t>(pattern_id - 1);
  const auto& e = energy_levels.at(idx / np);
  const auto& p = power_levels.at(idx % np);
  return {e.mean, e.std, p.mean, p.std};
}

std::optional<std::size_t> ScenarioConfig::test_change_point() const {
  if (change_point > test_length) return std::nullopt;
  return change_point;
}

void validate(const ScenarioConfig& config) {
  check_levels(config.energy_levels, "energy_levels");
  check_levels(config.power_levels, "power_levels");
  if (config.pattern_probs.size() != config.energy_levels.size()) {
    throw ConfigError("pattern_probs must have one row per energy level");
  }
  double total = 0.0;
  for (const auto& row : config.pattern_probs) {
    if (row.size() != config.power_levels.size()) {
      throw ConfigError("pattern_probs rows must have one entry per power level");
    }
    for (double p : row) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("pattern_probs entries must be >= 0");
      total += p;
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigError("pattern_probs must sum to 1 (got " + std::to_string(total) + ")");
  }
  if (config.change_point < 1 || config.change_point > config.test_length + 1) {
    throw ConfigError("change_point must lie in [1, test_length + 1]");
  }
  if (!(config.diversion_prob >= 0.0 && config.diversion_prob <= 1.0)) {
    throw ConfigError("diversion_prob must lie in [0, 1]");
  }
  if (!std::isfinite(config.diversion_energy_add) || !std::isfinite(config.diversion_power_add)) {
    throw ConfigError("diversion increments must be finite");
  }
}

ScenarioConfig default_paper_scenario() {
  ScenarioConfig c;
  c.energy_levels = {{3.43, 0.03}, {4.35, 0.03}, {5.29, 0.03}};
  c.power_levels = {{0.1, 0.001}, {0.2, 0.001}};
  c.pattern_probs.assign(3, std::vector<double>(2, 1.0 / 6.0));
  c.training_length = 1000;
  c.test_length = 3000;
  c.change_point = 1001;
  c.diversion_prob = 0.2;
  c.diversion_energy_add = 0.1934;
  c.diversion_power_add = 0.001;
  return c;
}

LabeledSeries generate(const ScenarioConfig& config, std::size_t length,
                       std::optional<std::size_t> change_point, RngStream rng) {
  validate(config);
  std::vector<double> cumulative;
  for (const auto& row : config.pattern_probs) {
    for (double p : row) cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + p);
  }

  LabeledSeries out;
  std::vector<ShipmentObservation> obs;
  obs.reserve(length);
  out.pattern.reserve(length);
  out.diverted.reserve(length);
  for (std::size_t t = 1; t <= length; ++t) {
    const double u = rng.uniform() * cumulative.back();
    std::size_t k = 0;
    while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
    const int pattern_id = static_cast<int>(k + 1);
    const auto pat = config.pattern(pattern_id);

    double energy = positive_normal(rng, pat.energy_mean, pat.energy_std);
    double power = positive_normal(rng, pat.power_mean, pat.power_std);
    const double u_divert = rng.uniform();
    const bool diverted = change_point && t >= *change_point && u_divert < config.diversion_prob;
    if (diverted) {
      energy += config.diversion_energy_add;
      power += config.diversion_power_add;
    }
    obs.push_back({t, energy / power, power});
    out.pattern.push_back(pattern_id);
    out.diverted.push_back(diverted);
  }
  out.series = ShipmentSeries(std::move(obs));
  out.change_point = first_diversion(out.diverted);
  return out;
}

TrainingAndTest generate_training_and_test(const ScenarioConfig& config, const RngStream& rng) {
  return {generate(config, config.training_length, std::nullopt, rng.substream(kTrainingSubstream)),
          generate(config, config.test_length, config.test_change_point(),
                   rng.substream(kTestSubstream))};
}

}  // namespace dsentry
