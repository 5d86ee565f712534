#include "dsentry/detectors/g_cusum.hpp"

namespace dsentry::detectors {

GCusumModel train_g_cusum(const ShipmentSeries& training, const ShiftSpec& shift) {
  validate(shift);
  if (training.size() < 10) throw TrainingError("G-CUSUM training needs at least 10 shipments");
  return {stats::fit_gaussian(training.durations()), stats::fit_gaussian(training.powers()), shift};
}

Verdict g_cusum_step(const GCusumModel& model, DualCusumState& state,
                     const ShipmentObservation& obs, double threshold) {
  if (state.clock.alarmed()) return Verdict::kAlarm;
  ++state.clock.t;
  state.duration_stat =
      cusum_step(state.duration_stat, glr_shift_llr(obs.duration_days, model.duration_g0, model.shift));
  state.power_stat = cusum_step(state.power_stat, glr_shift_llr(obs.power, model.power_g0, model.shift));
  if (state.statistic() >= threshold) {
    state.clock.alarm_time = state.clock.t;
    return Verdict::kAlarm;
  }
  return Verdict::kContinue;
}

}  // namespace dsentry::detectors
