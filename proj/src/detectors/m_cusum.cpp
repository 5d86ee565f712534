#include "dsentry/detectors/m_cusum.hpp"

#include <limits>
#include <string>

namespace dsentry::detectors {

MCusumModel train_m_cusum(const ShipmentSeries& training, const ShiftSpec& shift,
                          const RngStream& rng, const MCusumTrainingOptions& options,
                          MCusumTrainingReport* report) {
  validate(shift);
  if (options.m_min < 2 || options.m_max < options.m_min) {
    throw TrainingError("cluster-count range must satisfy 2 <= m_min <= m_max");
  }
  if (training.size() < 10 * options.m_max) {
    throw TrainingError("M-CUSUM training needs at least " + std::to_string(10 * options.m_max) +
                        " shipments, got " + std::to_string(training.size()));
  }

  MCusumModel model;
  model.shift = shift;
  model.embedding = stats::fit_embedding(training);
  const auto points = stats::embed_all(model.embedding, training);
  auto selection = stats::select_m(points, options.m_min, options.m_max, rng, options.kmeans);
  model.m = selection.m;

  std::vector<std::vector<double>> energies(model.m), powers(model.m);
  for (std::size_t i = 0; i < training.size(); ++i) {
    const auto c = selection.assignment.labels[i];
    energies[c].push_back(energy_of(training[i]));
    powers[c].push_back(training[i].power);
  }
  for (std::size_t c = 0; c < model.m; ++c) {
    if (energies[c].size() < 2) {
      throw TrainingError("cluster " + std::to_string(c + 1) + " has " +
                          std::to_string(energies[c].size()) + " shipment(s); need at least 2");
    }
    model.energy_g0.push_back(stats::fit_gaussian(energies[c]));
    model.power_g0.push_back(stats::fit_gaussian(powers[c]));
  }

  if (report != nullptr) {
    report->silhouette_scores = selection.scores;
    report->cluster_sizes.clear();
    for (const auto& e : energies) report->cluster_sizes.push_back(e.size());
  }
  return model;
}

double m_cusum_llr(const MCusumModel& model, const ShipmentObservation& obs) {
  const double e = energy_of(obs);
  const double z = obs.power;
  double best1 = -std::numeric_limits<double>::infinity();
  double best0 = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < model.m; ++c) {
    const auto& ge = model.energy_g0[c];
    const auto& gz = model.power_g0[c];
    best1 = std::max(best1, shifted_log_pdf(e, ge, model.shift) + shifted_log_pdf(z, gz, model.shift));
    best0 = std::max(best0, ge.log_pdf(e) + gz.log_pdf(z));
  }
  return best1 - best0;
}

Verdict m_cusum_step(const MCusumModel& model, MCusumState& state, const ShipmentObservation& obs,
                     double threshold) {
  if (state.clock.alarmed()) return Verdict::kAlarm;
  ++state.clock.t;
  state.stat = cusum_step(state.stat, m_cusum_llr(model, obs));
  if (state.stat >= threshold) {
    state.clock.alarm_time = state.clock.t;
    return Verdict::kAlarm;
  }
  return Verdict::kContinue;
}

}  // namespace dsentry::detectors
