#include "dsentry/detectors/gm_cusum.hpp"

#include <limits>
#include <string>

namespace dsentry::detectors {

GmCusumModel train_gm_cusum(const ShipmentSeries& training, const ShiftSpec& shift,
                            std::size_t k_max, const RngStream& rng) {
  validate(shift);
  if (k_max == 0) throw TrainingError("k_max must be >= 1");
  if (training.size() < 2 * k_max) {
    throw TrainingError("GM-CUSUM training needs at least " + std::to_string(2 * k_max) +
                        " shipments");
  }
  auto durations = stats::select_gmm_bic(training.durations(), k_max, rng.substream(1));
  auto powers = stats::select_gmm_bic(training.powers(), k_max, rng.substream(2));
  return {std::move(durations.fit.mixture), std::move(powers.fit.mixture), shift};
}

double mixture_shift_llr(double x, const stats::GaussianMixture& mix, const ShiftSpec& shift) {
  double best1 = -std::numeric_limits<double>::infinity();
  double best0 = -std::numeric_limits<double>::infinity();
  for (const auto& g : mix.components) {
    best1 = std::max(best1, shifted_log_pdf(x, g, shift));
    best0 = std::max(best0, g.log_pdf(x));
  }
  return best1 - best0;
}

Verdict gm_cusum_step(const GmCusumModel& model, DualCusumState& state,
                      const ShipmentObservation& obs, double threshold) {
  if (state.clock.alarmed()) return Verdict::kAlarm;
  ++state.clock.t;
  state.duration_stat = cusum_step(state.duration_stat,
                                   mixture_shift_llr(obs.duration_days, model.duration_mix, model.shift));
  state.power_stat =
      cusum_step(state.power_stat, mixture_shift_llr(obs.power, model.power_mix, model.shift));
  if (state.statistic() >= threshold) {
    state.clock.alarm_time = state.clock.t;
    return Verdict::kAlarm;
  }
  return Verdict::kContinue;
}

}  // namespace dsentry::detectors
