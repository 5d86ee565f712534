#pragma once

#include "dsentry/core.hpp"
#include "dsentry/detectors/cusum.hpp"
#include "dsentry/stats/gaussian.hpp"

namespace dsentry::detectors {

/// Two parallel CUSUMs (duration, power) sharing one threshold; alarm at the
/// earlier of the two stopping times.
struct DualCusumState {
  StreamClock clock;
  double duration_stat = 0.0;  // U_t
  double power_stat = 0.0;     // V_t

  double statistic() const noexcept { return std::max(duration_stat, power_stat); }
};

/// Gaussian-based CUSUM: one Gaussian per modality fitted to training.
struct GCusumModel {
  stats::GaussianParams duration_g0;
  stats::GaussianParams power_g0;
  ShiftSpec shift;

  friend bool operator==(const GCusumModel&, const GCusumModel&) = default;
};

/// Throws TrainingError for fewer than 10 shipments, EstimationError for
/// zero variance.
GCusumModel train_g_cusum(const ShipmentSeries& training, const ShiftSpec& shift);

Verdict g_cusum_step(const GCusumModel& model, DualCusumState& state,
                     const ShipmentObservation& obs, double threshold);

}  // namespace dsentry::detectors
