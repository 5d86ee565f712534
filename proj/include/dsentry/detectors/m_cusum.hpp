#pragma once

/// \file m_cusum.hpp
/// Multimodal CUSUM.
///
/// Given the power z, the duration y = e / z varies only through the energy
/// e = y z, so the joint density of a shipment under customer pattern m
/// factors as f_m(e) f_m(z). Training clusters the standardized (y, z)
/// embeddings, picks the cluster count by silhouette, and fits one Gaussian
/// per cluster for e and for z. The per-shipment log-likelihood ratio is
///
///   max_m [log f1_m(e) + log f1_m(z)] - max_m [log f0_m(e) + log f0_m(z)]
///
/// where f1_m has each mean moved to its clamped ML value inside the shift
/// interval.

#include <cstddef>
#include <vector>

#include "dsentry/core.hpp"
#include "dsentry/detectors/cusum.hpp"
#include "dsentry/rng.hpp"
#include "dsentry/stats/clustering.hpp"
#include "dsentry/stats/gaussian.hpp"

namespace dsentry::detectors {

struct MCusumModel {
  stats::EmbeddingModel embedding;
  std::size_t m = 1;
  std::vector<stats::GaussianParams> energy_g0;
  std::vector<stats::GaussianParams> power_g0;
  ShiftSpec shift;

  friend bool operator==(const MCusumModel&, const MCusumModel&) = default;
};

struct MCusumState {
  StreamClock clock;
  double stat = 0.0;  // S^M_t

  double statistic() const noexcept { return stat; }
};

struct MCusumTrainingOptions {
  std::size_t m_min = 2;
  std::size_t m_max = 8;
  stats::KMeansOptions kmeans;
};

/// Summary of the cluster-count search, for reporting.
struct MCusumTrainingReport {
  std::vector<double> silhouette_scores;  // m_min..m_max
  std::vector<std::size_t> cluster_sizes;
};

/// Throws TrainingError when training has fewer than 10 * m_max shipments
/// or any cluster holds fewer than 2 shipments.
MCusumModel train_m_cusum(const ShipmentSeries& training, const ShiftSpec& shift,
                          const RngStream& rng, const MCusumTrainingOptions& options = {},
                          MCusumTrainingReport* report = nullptr);

/// Joint log-likelihood ratio of one shipment.
double m_cusum_llr(const MCusumModel& model, const ShipmentObservation& obs);

Verdict m_cusum_step(const MCusumModel& model, MCusumState& state, const ShipmentObservation& obs,
                     double threshold);

}  // namespace dsentry::detectors
