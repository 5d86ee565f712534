#pragma once

/// \file detector.hpp
/// Type-erased front end over the four detectors.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dsentry/detectors/g_cusum.hpp"
#include "dsentry/detectors/gm_cusum.hpp"
#include "dsentry/detectors/ks.hpp"
#include "dsentry/detectors/m_cusum.hpp"

namespace dsentry::detectors {

enum class DetectorKind { kKs, kGCusum, kGmCusum, kMCusum };

/// "ks", "g_cusum", "gm_cusum", "m_cusum".
std::string_view kind_name(DetectorKind kind) noexcept;
/// Throws ConfigError for unknown names.
DetectorKind parse_kind(std::string_view name);

using TrainedModel = std::variant<KsModel, GCusumModel, GmCusumModel, MCusumModel>;

DetectorKind kind_of(const TrainedModel& model) noexcept;

struct TrainOptions {
  DetectorKind kind = DetectorKind::kMCusum;
  ShiftSpec shift;
  std::size_t window = 50;  // KS
  std::size_t k_max = 8;    // GM-CUSUM
  MCusumTrainingOptions m_cusum;
};

TrainedModel train(const ShipmentSeries& training, const TrainOptions& options,
                   const RngStream& rng);

/// A trained model plus its streaming state. Models are shared read-only, so
/// many detectors may run concurrently on one model.
class Detector {
 public:
  explicit Detector(std::shared_ptr<const TrainedModel> model);

  DetectorKind kind() const noexcept { return kind_of(*model_); }

  Verdict step(const ShipmentObservation& obs, double threshold);

  /// Consumes obs without a threshold and returns the alarm statistic
  /// (max of the per-modality statistics for KS, G- and GM-CUSUM; S^M for
  /// M-CUSUM). KS returns nullopt until its window is full.
  std::optional<double> advance(const ShipmentObservation& obs);

  std::optional<double> statistic() const;
  std::size_t steps() const noexcept;
  std::optional<std::size_t> alarm_time() const noexcept;

  void reset();

 private:
  using State = std::variant<KsState, DualCusumState, MCusumState>;
  std::shared_ptr<const TrainedModel> model_;
  State state_;
};

/// First alarm over a whole series, or nullopt.
std::optional<std::size_t> first_alarm(const TrainedModel& model, const ShipmentSeries& series,
                                       double threshold);

}  // namespace dsentry::detectors
