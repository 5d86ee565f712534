#include "dsentry/detectors/detector.hpp"

#include <limits>

namespace dsentry::detectors {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kNoThreshold = std::numeric_limits<double>::infinity();

}  // namespace

std::string_view kind_name(DetectorKind kind) noexcept {
  switch (kind) {
    case DetectorKind::kKs: return "ks";
    case DetectorKind::kGCusum: return "g_cusum";
    case DetectorKind::kGmCusum: return "gm_cusum";
    case DetectorKind::kMCusum: return "m_cusum";
  }
  return "unknown";
}

DetectorKind parse_kind(std::string_view name) {
  for (auto k : {DetectorKind::kKs, DetectorKind::kGCusum, DetectorKind::kGmCusum, DetectorKind::kMCusum}) {
    if (kind_name(k) == name) return k;
  }
  throw ConfigError("unknown detector kind '" + std::string(name) +
                    "' (expected ks, g_cusum, gm_cusum or m_cusum)");
}

DetectorKind kind_of(const TrainedModel& model) noexcept {
  return std::visit(overloaded{[](const KsModel&) { return DetectorKind::kKs; },
                               [](const GCusumModel&) { return DetectorKind::kGCusum; },
                               [](const GmCusumModel&) { return DetectorKind::kGmCusum; },
                               [](const MCusumModel&) { return DetectorKind::kMCusum; }},
                    model);
}

TrainedModel train(const ShipmentSeries& training, const TrainOptions& options,
                   const RngStream& rng) {
  switch (options.kind) {
    case DetectorKind::kKs: return train_ks(training, options.window);
    case DetectorKind::kGCusum: return train_g_cusum(training, options.shift);
    case DetectorKind::kGmCusum: return train_gm_cusum(training, options.shift, options.k_max, rng);
    case DetectorKind::kMCusum: return train_m_cusum(training, options.shift, rng, options.m_cusum);
  }
  throw ConfigError("unknown detector kind");
}

Detector::Detector(std::shared_ptr<const TrainedModel> model) : model_(std::move(model)) {
  reset();
}

void Detector::reset() {
  state_ = std::visit(overloaded{[](const KsModel&) -> State { return KsState{}; },
                                 [](const MCusumModel&) -> State { return MCusumState{}; },
                                 [](const auto&) -> State { return DualCusumState{}; }},
                      *model_);
}

Verdict Detector::step(const ShipmentObservation& obs, double threshold) {
  return std::visit(
      overloaded{
          [&](const KsModel& m) { return ks_step(m, std::get<KsState>(state_), obs, threshold); },
          [&](const GCusumModel& m) {
            return g_cusum_step(m, std::get<DualCusumState>(state_), obs, threshold);
          },
          [&](const GmCusumModel& m) {
            return gm_cusum_step(m, std::get<DualCusumState>(state_), obs, threshold);
          },
          [&](const MCusumModel& m) {
            return m_cusum_step(m, std::get<MCusumState>(state_), obs, threshold);
          }},
      *model_);
}

std::optional<double> Detector::advance(const ShipmentObservation& obs) {
  step(obs, kNoThreshold);
  return statistic();
}

std::optional<double> Detector::statistic() const {
  return std::visit(overloaded{[](const KsState& s) { return s.statistic(); },
                               [](const DualCusumState& s) -> std::optional<double> { return s.statistic(); },
                               [](const MCusumState& s) -> std::optional<double> { return s.statistic(); }},
                    state_);
}

std::size_t Detector::steps() const noexcept {
  return std::visit([](const auto& s) { return s.clock.t; }, state_);
}

std::optional<std::size_t> Detector::alarm_time() const noexcept {
  return std::visit([](const auto& s) { return s.clock.alarm_time; }, state_);
}

std::optional<std::size_t> first_alarm(const TrainedModel& model, const ShipmentSeries& series,
                                       double threshold) {
  Detector det(std::make_shared<const TrainedModel>(model));
  for (const auto& obs : series) {
    if (det.step(obs, threshold) == Verdict::kAlarm) return det.alarm_time();
  }
  return std::nullopt;
}

}  // namespace dsentry::detectors
