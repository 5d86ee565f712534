#pragma once

/// \file bench.hpp
/// Monte Carlo estimation of false-alarm rate P(T < T*) and average
/// detection delay E[T - T* | T >= T*] over threshold sweeps.
///
/// Trials are paired: trial i of every sweep (every threshold, every
/// detector) sees the test stream drawn from trial_stream(seed, i). Because a
/// detector's statistic path does not depend on the threshold until it
/// alarms, one pass per trial yields the alarm time for every threshold.
///
/// sweep() distributes trials over OpenMP threads; sweep_serial() is the
/// single-threaded reference. Both reduce in trial order and return
/// bit-identical curves.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsentry/detectors/detector.hpp"
#include "dsentry/rng.hpp"
#include "dsentry/simulator.hpp"

namespace dsentry::bench {

enum class OutcomeKind { kFalseAlarm, kDetection, kCensored };

struct TrialOutcome {
  OutcomeKind kind = OutcomeKind::kCensored;
  std::size_t stop_time = 0;     // T; stream length when censored
  std::size_t change_point = 1;  // T*

  /// T - T*, defined for detections only.
  std::size_t delay() const noexcept { return stop_time - change_point; }

  /// Alarm before T* is a false alarm; at or after T* a detection (delay may
  /// be 0); no alarm is censored.
  static TrialOutcome classify(std::optional<std::size_t> alarm, std::size_t change_point,
                               std::size_t stream_length);
};

struct CurvePoint {
  double threshold = 0.0;
  std::size_t trials = 0;
  std::size_t n_false = 0;
  std::size_t n_detect = 0;
  std::size_t n_censored = 0;
  double far = 0.0;
  std::optional<double> add;
  /// 1.96 * sd / sqrt(n_detect); 0 with a single detection.
  std::optional<double> add_ci_halfwidth;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

using Curve = std::vector<CurvePoint>;

/// Pools outcomes at one threshold. Requires at least one outcome.
CurvePoint estimate(std::span<const TrialOutcome> outcomes, double threshold);

/// Random stream of trial i for a given experiment seed.
RngStream trial_stream(std::uint64_t seed, std::size_t trial);
/// Random stream for the experiment's shared training series.
RngStream training_stream(std::uint64_t seed);
/// Random stream for fitting a detector of the given kind.
RngStream model_stream(std::uint64_t seed, detectors::DetectorKind kind);

using SharedModel = std::shared_ptr<const detectors::TrainedModel>;

/// Generates a fresh test stream from rng (change at config.change_point),
/// runs the detector, and classifies the result against T* = change_point.
TrialOutcome run_trial(const SharedModel& model, double threshold, const ScenarioConfig& config,
                       const RngStream& rng);

/// Alarm time for each (ascending) threshold on one stream; nullopt = none.
std::vector<std::optional<std::size_t>> alarm_times(const SharedModel& model,
                                                    const ShipmentSeries& stream,
                                                    std::span<const double> thresholds);

struct SweepOptions {
  /// OpenMP thread count for sweep(); 0 uses the runtime default.
  int threads = 0;
};

/// One CurvePoint per threshold. Thresholds must be nonempty and strictly
/// increasing; trials >= 1.
Curve sweep(const SharedModel& model, std::span<const double> thresholds, std::size_t trials,
            const ScenarioConfig& config, std::uint64_t seed, const SweepOptions& options = {});
Curve sweep_serial(const SharedModel& model, std::span<const double> thresholds,
                   std::size_t trials, const ScenarioConfig& config, std::uint64_t seed);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

/// Default 25-point sweep for a detector kind on the default scenario.
std::vector<double> default_thresholds(detectors::DetectorKind kind);

/// Linear interpolation of ADD (and its CI half-width) at a target FAR along
/// a curve whose FAR is nonincreasing in threshold. nullopt if the target is
/// outside the curve's FAR range or the bracketing points lack an ADD.
struct MatchedAdd {
  double add;
  double ci_halfwidth;
};
std::optional<MatchedAdd> add_at_far(const Curve& curve, double far);

struct AlgorithmRun {
  detectors::DetectorKind kind;
  SharedModel model;
  std::vector<double> thresholds;
  Curve curve;
};

struct ExperimentOptions {
  std::vector<detectors::DetectorKind> algorithms;
  detectors::TrainOptions train;  // kind is overridden per algorithm
  std::size_t trials = 200;
  /// Per-algorithm thresholds; empty entries fall back to default_thresholds.
  std::vector<std::vector<double>> thresholds;
  SweepOptions sweep;
};

/// One shared training series from training_stream(seed), one model per
/// algorithm, and paired sweeps.
std::vector<AlgorithmRun> run_experiment(const ScenarioConfig& config, std::uint64_t seed,
                                         const ExperimentOptions& options);

}  // namespace dsentry::bench
