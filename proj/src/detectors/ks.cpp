#include "dsentry/detectors/ks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dsentry/stats/gaussian.hpp"

namespace dsentry::detectors {

namespace {

constexpr double kZMax = 9.0;
constexpr std::size_t kPhiNodesPerUnit = 512;
constexpr std::size_t kPhiNodes = static_cast<std::size_t>(2 * kZMax) * kPhiNodesPerUnit + 1;
constexpr double kPhiStep = 1.0 / static_cast<double>(kPhiNodesPerUnit);

double normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) * std::numbers::inv_sqrtpi / std::numbers::sqrt2;
}

double hermite(double u, double step, double v0, double s0, double v1, double s1) noexcept {
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * v0 + (u3 - 2 * u2 + u) * step * s0 + (-2 * u3 + 3 * u2) * v1 +
         (u3 - u2) * step * s1;
}

struct PhiTable {
  std::vector<double> values;
  std::vector<double> slopes;

  PhiTable() : values(kPhiNodes), slopes(kPhiNodes) {
    for (std::size_t k = 0; k < kPhiNodes; ++k) {
      const double z = -kZMax + static_cast<double>(k) * kPhiStep;
      values[k] = stats::normal_cdf(z);
      slopes[k] = normal_pdf(z);
    }
  }
};

const PhiTable& phi_table() {
  static const PhiTable table;
  return table;
}

double kernel_density(const stats::KernelCdf& cdf, double x) {
  double acc = 0.0;
  for (double xi : cdf.sample_points) acc += normal_pdf((x - xi) / cdf.bandwidth);
  return acc / (static_cast<double>(cdf.sample_points.size()) * cdf.bandwidth);
}

void push_window(std::deque<double>& buf, double x, std::size_t cap) {
  buf.push_back(x);
  if (buf.size() > cap) buf.pop_front();
}

double window_distance(const KsBaselineTable& table, std::span<const double> window,
                       double fallback_bandwidth) {
  std::vector<double> sorted(window.begin(), window.end());
  std::sort(sorted.begin(), sorted.end());
  double h = 0.0;
  try {
    h = stats::silverman_bandwidth(sorted);
  } catch (const EstimationError&) {
    h = fallback_bandwidth;  // window of identical values
  }
  return table.distance_to(sorted, h);
}

}  // namespace

double fast_normal_cdf(double z) noexcept {
  if (z <= -kZMax) return 0.0;
  if (z >= kZMax) return 1.0;
  const auto& tab = phi_table();
  const double pos = (z + kZMax) * static_cast<double>(kPhiNodesPerUnit);
  auto k = static_cast<std::size_t>(pos);
  if (k >= kPhiNodes - 1) k = kPhiNodes - 2;
  const double u = pos - static_cast<double>(k);
  return hermite(u, kPhiStep, tab.values[k], tab.slopes[k], tab.values[k + 1], tab.slopes[k + 1]);
}

KsBaselineTable::KsBaselineTable(const stats::KernelCdf& baseline) {
  const double h = baseline.bandwidth;
  lo_ = baseline.sample_points.front() - 10.0 * h;
  hi_ = baseline.sample_points.back() + 10.0 * h;
  step_ = (hi_ - lo_) / static_cast<double>(kTableNodes - 1);
  values_.resize(kTableNodes);
  slopes_.resize(kTableNodes);
  for (std::size_t k = 0; k < kTableNodes; ++k) {
    const double x = lo_ + static_cast<double>(k) * step_;
    values_[k] = baseline(x);
    slopes_[k] = kernel_density(baseline, x);
  }
  grid_.resize(kGridPoints);
  grid_values_.resize(kGridPoints);
  const double gstep = (hi_ - lo_) / static_cast<double>(kGridPoints - 1);
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    grid_[k] = lo_ + static_cast<double>(k) * gstep;
    grid_values_[k] = baseline(grid_[k]);
  }
}

double KsBaselineTable::operator()(double x) const noexcept {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  const double pos = (x - lo_) / step_;
  auto k = static_cast<std::size_t>(pos);
  if (k >= kTableNodes - 1) k = kTableNodes - 2;
  const double u = pos - static_cast<double>(k);
  return hermite(u, step_, values_[k], slopes_[k], values_[k + 1], slopes_[k + 1]);
}

double KsBaselineTable::distance_to(std::span<const double> sorted_window,
                                    double window_bandwidth) const {
  const double inv_h = 1.0 / window_bandwidth;
  const double inv_n = 1.0 / static_cast<double>(sorted_window.size());
  auto window_cdf = [&](double x) {
    double acc = 0.0;
    for (double w : sorted_window) acc += fast_normal_cdf((x - w) * inv_h);
    return acc * inv_n;
  };

  double best = 0.0;
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    best = std::max(best, std::abs(window_cdf(grid_[k]) - grid_values_[k]));
  }
  auto probe = [&](double x) { best = std::max(best, std::abs(window_cdf(x) - (*this)(x))); };
  probe(sorted_window.front() - 10.0 * window_bandwidth);
  probe(sorted_window.back() + 10.0 * window_bandwidth);
  for (std::size_t i = 0; i < sorted_window.size(); ++i) {
    probe(sorted_window[i]);
    if (i + 1 < sorted_window.size()) probe(0.5 * (sorted_window[i] + sorted_window[i + 1]));
  }
  return std::min(best, 1.0);
}

void KsModel::prepare() {
  duration_table = std::make_shared<const KsBaselineTable>(baseline_duration);
  power_table = std::make_shared<const KsBaselineTable>(baseline_power);
}

std::optional<double> KsState::statistic() const {
  if (!d_stat || !e_stat) return std::nullopt;
  return std::max(*d_stat, *e_stat);
}

KsModel train_ks(const ShipmentSeries& training, std::size_t window) {
  if (window < 2) throw TrainingError("KS window must be >= 2, got " + std::to_string(window));
  const auto needed = std::max<std::size_t>(window, 10);
  if (training.size() < needed) {
    throw TrainingError("KS training needs at least " + std::to_string(needed) + " shipments");
  }
  KsModel model;
  model.baseline_duration = stats::make_kernel_cdf(training.durations());
  model.baseline_power = stats::make_kernel_cdf(training.powers());
  model.window = window;
  model.prepare();
  return model;
}

KsStatistics ks_window_statistics(const KsModel& model, std::span<const double> durations,
                                  std::span<const double> powers) {
  if (!model.duration_table || !model.power_table) {
    KsModel prepared = model;
    prepared.prepare();
    return ks_window_statistics(prepared, durations, powers);
  }
  return {window_distance(*model.duration_table, durations, model.baseline_duration.bandwidth),
          window_distance(*model.power_table, powers, model.baseline_power.bandwidth)};
}

Verdict ks_step(const KsModel& model, KsState& state, const ShipmentObservation& obs,
                double threshold) {
  if (state.clock.alarmed()) return Verdict::kAlarm;
  ++state.clock.t;
  push_window(state.durations, obs.duration_days, model.window);
  push_window(state.powers, obs.power, model.window);
  if (state.durations.size() < model.window) return Verdict::kContinue;

  const std::vector<double> d(state.durations.begin(), state.durations.end());
  const std::vector<double> p(state.powers.begin(), state.powers.end());
  const auto stats = ks_window_statistics(model, d, p);
  state.d_stat = stats.d;
  state.e_stat = stats.e;
  if (std::max(stats.d, stats.e) >= threshold) {
    state.clock.alarm_time = state.clock.t;
    return Verdict::kAlarm;
  }
  return Verdict::kContinue;
}

}  // namespace dsentry::detectors
