#pragma once

/// \file simulator.hpp
/// Synthetic enrichment-facility shipment streams.
///
/// Each shipment draws a customer pattern (an energy level paired with a power
/// level), then energy e ~ N(mu_e, sigma_e) and power z ~ N(mu_p, sigma_p),
/// each redrawn until positive. From the change point on, each shipment is
/// diverted with probability p_d, which adds a fixed increment to e and z.
/// The emitted duration is y = e / z.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dsentry/core.hpp"
#include "dsentry/rng.hpp"

namespace dsentry {

struct Level {
  double mean = 1.0;
  double std = 1.0;

  friend bool operator==(const Level&, const Level&) = default;
};

/// Gaussian parameters of one customer pattern.
struct CustomerPattern {
  double energy_mean;
  double energy_std;
  double power_mean;
  double power_std;
};

struct ScenarioConfig {
  std::vector<Level> energy_levels;
  std::vector<Level> power_levels;
  /// pattern_probs[i][j]: probability of energy level i with power level j.
  std::vector<std::vector<double>> pattern_probs;
  std::size_t training_length = 1000;
  std::size_t test_length = 3000;
  /// 1-based index into the test stream; test_length + 1 means "no change".
  std::size_t change_point = 1001;
  double diversion_prob = 0.2;
  double diversion_energy_add = 0.1934;
  double diversion_power_add = 0.001;

  std::size_t pattern_count() const noexcept {
    return energy_levels.size() * power_levels.size();
  }
  /// 1-based pattern id -> Gaussian parameters. Ids enumerate energy-major.
  CustomerPattern pattern(int pattern_id) const;
  /// The configured change point, or nullopt when it encodes "no change".
  std::optional<std::size_t> test_change_point() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const ScenarioConfig& config);

/// Six patterns: energies {3.43, 4.35, 5.29} +/- 0.03 MTSWU crossed with
/// powers {0.1, 0.2} +/- 0.001 MTSWU/day, uniform; tau = 1000; p_d = 0.2;
/// +0.1934 MTSWU and +0.001 MTSWU/day per diversion; 3000 test shipments
/// with diversions possible from shipment 1001.
ScenarioConfig default_paper_scenario();

/// `length` shipments; shipments t >= change_point may be diverted. The
/// random draws consumed per shipment do not depend on whether a diversion
/// happens, so two calls with the same rng differ only in diverted rows.
LabeledSeries generate(const ScenarioConfig& config, std::size_t length,
                       std::optional<std::size_t> change_point, RngStream rng);

struct TrainingAndTest {
  LabeledSeries training;
  LabeledSeries test;
};

/// Diversion-free training stream of length tau from substream 1 and the test
/// stream (test_length, change at config.change_point) from substream 2.
TrainingAndTest generate_training_and_test(const ScenarioConfig& config, const RngStream& rng);

/// Substream keys, exposed so other components can reproduce the split.
inline constexpr std::uint64_t kTrainingSubstream = 1;
inline constexpr std::uint64_t kTestSubstream = 2;

}  // namespace dsentry
