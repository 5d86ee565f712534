#pragma once

/// \file model_json.hpp
/// Model persistence. A model document is a JSON object with a `kind`
/// discriminator (`ks`, `g_cusum`, `gm_cusum`, `m_cusum`) and the model's
/// fields under their type field names, e.g.
///
///   {"kind": "g_cusum",
///    "duration_g0": {"mean": 32.7, "std": 12.4},
///    "power_g0": {"mean": 0.15, "std": 0.05},
///    "shift": {"lower_mult": 0.5, "upper_mult": 3.0}}
///
/// Reals are written in shortest round-trip form.

#include <string>

#include <nlohmann/json.hpp>

#include "dsentry/detectors/detector.hpp"

namespace dsentry::detectors {

nlohmann::json model_to_json(const TrainedModel& model);
/// Throws ConfigError on a malformed document or unknown kind.
TrainedModel model_from_json(const nlohmann::json& doc);

void write_model_file(const std::string& path, const TrainedModel& model);
TrainedModel read_model_file(const std::string& path);

}  // namespace dsentry::detectors
