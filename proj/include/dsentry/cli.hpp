#pragma once

/// \file cli.hpp
/// `dsentry` command-line front end: simulate, train, detect, bench, swu.
///
/// Exit codes: 0 success, 1 usage, 2 invalid config or data, 3 I/O.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsentry/detectors/detector.hpp"
#include "dsentry/simulator.hpp"

namespace dsentry::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitIo = 3;

inline constexpr const char* kThreadsEnv = "DIVERSION_SENTRY_THREADS";

/// Everything a benchmark run needs. As a JSON document the keys are the
/// field names below; `scenario` holds a scenario document and `algo` may be
/// a single name or a list.
struct CliConfig {
  ScenarioConfig scenario = default_paper_scenario();
  std::vector<detectors::DetectorKind> algo = {detectors::DetectorKind::kKs,
                                               detectors::DetectorKind::kGCusum,
                                               detectors::DetectorKind::kGmCusum,
                                               detectors::DetectorKind::kMCusum};
  detectors::ShiftSpec shift;
  std::size_t window = 50;
  std::vector<double> thresholds;  // empty: per-algorithm defaults
  std::size_t trials = 200;
  std::uint64_t seed = 0;
};

/// Throws ConfigError on bad values (trials == 0, invalid shift, ...).
CliConfig cli_config_from_json(const nlohmann::json& doc);
void validate(const CliConfig& config);

/// Parses the DIVERSION_SENTRY_THREADS value; nullopt when unset or empty.
/// Throws ConfigError for non-numeric or negative text.
std::optional<int> parse_thread_env(const char* value);

/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsentry::cli
