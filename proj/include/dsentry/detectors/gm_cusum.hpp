#pragma once

#include <cstddef>

#include "dsentry/core.hpp"
#include "dsentry/detectors/g_cusum.hpp"
#include "dsentry/rng.hpp"
#include "dsentry/stats/mixture.hpp"

namespace dsentry::detectors {

/// Mixture-based CUSUM. Per modality the log-likelihood ratio is
///   max_k log N(x; mu*_k, sigma_k) - max_k log N(x; mu_k, sigma_k),
/// with mu*_k the clamped ML mean of component k. Component weights do not
/// enter either maximum.
struct GmCusumModel {
  stats::GaussianMixture duration_mix;
  stats::GaussianMixture power_mix;
  ShiftSpec shift;

  friend bool operator==(const GmCusumModel&, const GmCusumModel&) = default;
};

/// Per modality fit_gmm for k = 1..k_max and keep the minimum BIC. Duration
/// fits use rng.substream(1), power fits rng.substream(2).
GmCusumModel train_gm_cusum(const ShipmentSeries& training, const ShiftSpec& shift,
                            std::size_t k_max, const RngStream& rng);

/// Mixture log-likelihood ratio for one modality.
double mixture_shift_llr(double x, const stats::GaussianMixture& mix, const ShiftSpec& shift);

Verdict gm_cusum_step(const GmCusumModel& model, DualCusumState& state,
                      const ShipmentObservation& obs, double threshold);

}  // namespace dsentry::detectors
