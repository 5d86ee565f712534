// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <memory>

#include "dsentry/bench/bench.hpp"
#include "dsentry/simulator.hpp"
#include "dsentry/stats/clustering.hpp"

using namespace dsentry;

namespace {

const std::vector<stats::Point2>& embedded_training() {
  static const auto pts = [] {
    const auto cfg = default_paper_scenario();
    const auto tr = generate(cfg, cfg.training_length, std::nullopt, RngStream(1, 0));
    return stats::embed_all(stats::fit_embedding(tr.series), tr.series);
  }();
  return pts;
}

const std::vector<std::size_t>& six_labels() {
  static const auto labels = stats::kmeans(embedded_training(), 6, RngStream(1, 6)).labels;
  return labels;
}

bench::SharedModel m_cusum_model() {
  static const auto model = [] {
    const auto cfg = default_paper_scenario();
    const auto tr = generate(cfg, cfg.training_length, std::nullopt, bench::training_stream(1));
    detectors::TrainOptions o;
    o.kind = detectors::DetectorKind::kMCusum;
    return std::make_shared<const detectors::TrainedModel>(detectors::train(
        tr.series, o, bench::model_stream(1, detectors::DetectorKind::kMCusum)));
  }();
  return model;
}

void BM_Silhouette(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stats::silhouette(embedded_training(), six_labels()));
}
void BM_SilhouetteSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(stats::silhouette_serial(embedded_training(), six_labels()));
}

void BM_KMeans(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stats::kmeans(embedded_training(), 6, RngStream(2, 0)));
}
void BM_KMeansSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(stats::kmeans_serial(embedded_training(), 6, RngStream(2, 0)));
}

void BM_Sweep(benchmark::State& state) {
  const auto thr = bench::default_thresholds(detectors::DetectorKind::kMCusum);
  for (auto _ : state)
    benchmark::DoNotOptimize(bench::sweep(m_cusum_model(), thr, 32, default_paper_scenario(), 3,
                                          {static_cast<int>(state.range(0))}));
}
void BM_SweepSerial(benchmark::State& state) {
  const auto thr = bench::default_thresholds(detectors::DetectorKind::kMCusum);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bench::sweep_serial(m_cusum_model(), thr, 32, default_paper_scenario(), 3));
}

}  // namespace

BENCHMARK(BM_Silhouette)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SilhouetteSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KMeans)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KMeansSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
