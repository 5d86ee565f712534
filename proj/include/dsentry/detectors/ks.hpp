#pragma once

/// \file ks.hpp
/// Sliding-window Kolmogorov-Smirnov detector.
///
/// Training stores kernel CDF baselines F (duration) and G (power). At test
/// time the last W observations form window CDFs F_n^W, G_n^W (Silverman
/// bandwidth of the window) and the detector alarms at the first n with
/// max(D_n, E_n) >= delta, where D_n = sup |F_n^W - F| and E_n = sup |G_n^W - G|.
///
/// The streaming statistic evaluates the supremum on a fixed 256-point grid
/// spanning each baseline (min - 10h .. max + 10h), plus the window points,
/// their midpoints and the window extremes +/- 10h_w. Baseline values come
/// from a cubic Hermite table with exact derivatives; the normal CDF inside
/// the window sum comes from the same kind of table on [-9, 9]. Both tables
/// are accurate to ~1e-12, and the grid keeps the result within 1e-3 of the
/// exhaustive stats::ks_distance.

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dsentry/core.hpp"
#include "dsentry/detectors/cusum.hpp"
#include "dsentry/stats/kernel_cdf.hpp"

namespace dsentry::detectors {

/// Normal CDF by cubic Hermite interpolation on [-9, 9] (0 / 1 outside).
double fast_normal_cdf(double z) noexcept;

/// Precomputed evaluation support for one baseline CDF.
class KsBaselineTable {
 public:
  static constexpr std::size_t kGridPoints = 256;
  static constexpr std::size_t kTableNodes = 4096;

  explicit KsBaselineTable(const stats::KernelCdf& baseline);

  /// Baseline CDF at an arbitrary abscissa (table interpolation).
  double operator()(double x) const noexcept;

  /// sup_x |W(x) - F(x)| for the window kernel CDF W.
  double distance_to(std::span<const double> sorted_window, double window_bandwidth) const;

 private:
  double lo_, hi_, step_;
  std::vector<double> values_;     // F at table nodes
  std::vector<double> slopes_;     // F' at table nodes
  std::vector<double> grid_;       // candidate grid
  std::vector<double> grid_values_;
};

struct KsModel {
  stats::KernelCdf baseline_duration;
  stats::KernelCdf baseline_power;
  std::size_t window = 50;

  /// Derived lookup tables; rebuilt by prepare().
  std::shared_ptr<const KsBaselineTable> duration_table;
  std::shared_ptr<const KsBaselineTable> power_table;

  void prepare();

  friend bool operator==(const KsModel& a, const KsModel& b) {
    return a.baseline_duration.sample_points == b.baseline_duration.sample_points &&
           a.baseline_duration.bandwidth == b.baseline_duration.bandwidth &&
           a.baseline_power.sample_points == b.baseline_power.sample_points &&
           a.baseline_power.bandwidth == b.baseline_power.bandwidth && a.window == b.window;
  }
};

struct KsState {
  StreamClock clock;
  std::deque<double> durations;
  std::deque<double> powers;
  std::optional<double> d_stat;  // D_n, last computed
  std::optional<double> e_stat;  // E_n, last computed

  /// max(D_n, E_n), once the window is full.
  std::optional<double> statistic() const;
};

/// Throws TrainingError if window < 2 or training is shorter than max(W, 10).
KsModel train_ks(const ShipmentSeries& training, std::size_t window);

/// Statistics for a window that is already full; no threshold applied.
struct KsStatistics {
  double d;
  double e;
};
KsStatistics ks_window_statistics(const KsModel& model, std::span<const double> durations,
                                  std::span<const double> powers);

/// Pushes obs into the window; once W observations are present computes
/// D_n and E_n and alarms when max(D_n, E_n) >= threshold.
Verdict ks_step(const KsModel& model, KsState& state, const ShipmentObservation& obs,
                double threshold);

}  // namespace dsentry::detectors
