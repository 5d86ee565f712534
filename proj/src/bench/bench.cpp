#include "dsentry/bench/bench.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace dsentry::bench {

using detectors::DetectorKind;

namespace {

constexpr std::uint64_t kTrainingStreamId = 0;
constexpr std::uint64_t kTrialStreamId = 1;
constexpr std::uint64_t kModelStreamId = 2;

void check_sweep_args(std::span<const double> thresholds, std::size_t trials) {
  if (thresholds.empty()) throw ConfigError("threshold list must not be empty");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) throw ConfigError("thresholds must be strictly increasing");
  }
  if (trials == 0) throw ConfigError("trials must be >= 1");
}

using AlarmTable = std::vector<std::vector<std::optional<std::size_t>>>;

std::vector<std::optional<std::size_t>> trial_alarms(const SharedModel& model,
                                                     std::span<const double> thresholds,
                                                     const ScenarioConfig& config,
                                                     std::uint64_t seed, std::size_t trial) {
  const auto stream = generate(config, config.test_length, config.test_change_point(),
                               trial_stream(seed, trial));
  return alarm_times(model, stream.series, thresholds);
}

Curve reduce(const AlarmTable& table, std::span<const double> thresholds,
             const ScenarioConfig& config) {
  Curve curve;
  std::vector<TrialOutcome> outcomes(table.size());
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    for (std::size_t i = 0; i < table.size(); ++i) {
      outcomes[i] = TrialOutcome::classify(table[i][j], config.change_point, config.test_length);
    }
    curve.push_back(estimate(outcomes, thresholds[j]));
  }
  return curve;
}

}  // namespace

TrialOutcome TrialOutcome::classify(std::optional<std::size_t> alarm, std::size_t change_point,
                                    std::size_t stream_length) {
  if (!alarm) return {OutcomeKind::kCensored, stream_length, change_point};
  if (*alarm < change_point) return {OutcomeKind::kFalseAlarm, *alarm, change_point};
  return {OutcomeKind::kDetection, *alarm, change_point};
}

CurvePoint estimate(std::span<const TrialOutcome> outcomes, double threshold) {
  if (outcomes.empty()) throw ConfigError("estimate needs at least one outcome");
  CurvePoint p;
  p.threshold = threshold;
  p.trials = outcomes.size();
  double sum = 0.0;
  for (const auto& o : outcomes) {
    switch (o.kind) {
      case OutcomeKind::kFalseAlarm: ++p.n_false; break;
      case OutcomeKind::kCensored: ++p.n_censored; break;
      case OutcomeKind::kDetection:
        ++p.n_detect;
        sum += static_cast<double>(o.delay());
        break;
    }
  }
  p.far = static_cast<double>(p.n_false) / static_cast<double>(p.trials);
  if (p.n_detect > 0) {
    const double n = static_cast<double>(p.n_detect);
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& o : outcomes) {
      if (o.kind != OutcomeKind::kDetection) continue;
      const double d = static_cast<double>(o.delay()) - mean;
      ss += d * d;
    }
    p.add = mean;
    p.add_ci_halfwidth = p.n_detect > 1 ? 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  }
  return p;
}

RngStream trial_stream(std::uint64_t seed, std::size_t trial) {
  return RngStream(seed, kTrialStreamId).substream(trial);
}

RngStream training_stream(std::uint64_t seed) {
  return RngStream(seed, kTrainingStreamId).substream(kTrainingSubstream);
}

RngStream model_stream(std::uint64_t seed, DetectorKind kind) {
  return RngStream(seed, kModelStreamId).substream(static_cast<std::uint64_t>(kind));
}

TrialOutcome run_trial(const SharedModel& model, double threshold, const ScenarioConfig& config,
                       const RngStream& rng) {
  const auto stream = generate(config, config.test_length, config.test_change_point(), rng);
  detectors::Detector det(model);
  std::optional<std::size_t> alarm;
  for (const auto& obs : stream.series) {
    if (det.step(obs, threshold) == detectors::Verdict::kAlarm) {
      alarm = det.alarm_time();
      break;
    }
  }
  return TrialOutcome::classify(alarm, config.change_point, config.test_length);
}

std::vector<std::optional<std::size_t>> alarm_times(const SharedModel& model,
                                                    const ShipmentSeries& stream,
                                                    std::span<const double> thresholds) {
  std::vector<std::optional<std::size_t>> out(thresholds.size());
  detectors::Detector det(model);
  std::size_t next = 0;
  for (const auto& obs : stream) {
    if (next == thresholds.size()) break;
    const auto stat = det.advance(obs);
    if (!stat) continue;
    while (next < thresholds.size() && *stat >= thresholds[next]) out[next++] = det.steps();
  }
  return out;
}

Curve sweep(const SharedModel& model, std::span<const double> thresholds, std::size_t trials,
            const ScenarioConfig& config, std::uint64_t seed, const SweepOptions& options) {
  check_sweep_args(thresholds, trials);
  validate(config);
  AlarmTable table(trials);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto trial = static_cast<std::size_t>(i);
    table[trial] = trial_alarms(model, thresholds, config, seed, trial);
  }
  return reduce(table, thresholds, config);
}

Curve sweep_serial(const SharedModel& model, std::span<const double> thresholds,
                   std::size_t trials, const ScenarioConfig& config, std::uint64_t seed) {
  check_sweep_args(thresholds, trials);
  validate(config);
  AlarmTable table(trials);
  for (std::size_t i = 0; i < trials; ++i) table[i] = trial_alarms(model, thresholds, config, seed, i);
  return reduce(table, thresholds, config);
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ConfigError("log_spaced needs 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> default_thresholds(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kKs: return log_spaced(0.17, 0.32, 25);
    case DetectorKind::kGCusum: return log_spaced(8.0, 80.0, 25);
    case DetectorKind::kGmCusum: return log_spaced(12.0, 120.0, 25);
    case DetectorKind::kMCusum: return log_spaced(10.0, 100.0, 25);
  }
  return {};
}

std::optional<MatchedAdd> add_at_far(const Curve& curve, double far) {
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const auto& a = curve[i];
    const auto& b = curve[i + 1];
    if (!(a.far >= far && far >= b.far)) continue;
    if (!a.add || !b.add) return std::nullopt;
    if (a.far == b.far) return MatchedAdd{*a.add, *a.add_ci_halfwidth};
    const double w = (a.far - far) / (a.far - b.far);
    return MatchedAdd{*a.add + w * (*b.add - *a.add),
                      *a.add_ci_halfwidth + w * (*b.add_ci_halfwidth - *a.add_ci_halfwidth)};
  }
  if (curve.size() == 1 && curve[0].far == far && curve[0].add) {
    return MatchedAdd{*curve[0].add, *curve[0].add_ci_halfwidth};
  }
  return std::nullopt;
}

std::vector<AlgorithmRun> run_experiment(const ScenarioConfig& config, std::uint64_t seed,
                                         const ExperimentOptions& options) {
  validate(config);
  const auto training = generate(config, config.training_length, std::nullopt, training_stream(seed));
  std::vector<AlgorithmRun> runs;
  for (std::size_t a = 0; a < options.algorithms.size(); ++a) {
    const auto kind = options.algorithms[a];
    auto train_opts = options.train;
    train_opts.kind = kind;
    AlgorithmRun run{kind,
                     std::make_shared<const detectors::TrainedModel>(
                         detectors::train(training.series, train_opts, model_stream(seed, kind))),
                     {},
                     {}};
    run.thresholds = a < options.thresholds.size() && !options.thresholds[a].empty()
                         ? options.thresholds[a]
                         : default_thresholds(kind);
    run.curve = sweep(run.model, run.thresholds, options.trials, config, seed, options.sweep);
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace dsentry::bench
