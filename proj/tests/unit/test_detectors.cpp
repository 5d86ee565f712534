#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "dsentry/core.hpp"
#include "dsentry/detectors/detector.hpp"
#include "dsentry/detectors/model_json.hpp"
#include "dsentry/simulator.hpp"
#include "dsentry/stats/kernel_cdf.hpp"
#include "oracles.hpp"

using namespace dsentry;
using namespace dsentry::detectors;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const TrainingAndTest& paper_data() {
  static const auto data = generate_training_and_test(default_paper_scenario(), RngStream(7, 0));
  return data;
}

std::shared_ptr<const TrainedModel> trained(DetectorKind kind) {
  static std::shared_ptr<const TrainedModel> cache[4];
  auto& slot = cache[static_cast<int>(kind)];
  if (!slot) {
    TrainOptions opts;
    opts.kind = kind;
    slot = std::make_shared<const TrainedModel>(
        train(paper_data().training.series, opts, RngStream(7, 2)));
  }
  return slot;
}

ShipmentSeries series_of(const std::vector<std::pair<double, double>>& yz) {
  std::vector<ShipmentObservation> obs;
  for (std::size_t i = 0; i < yz.size(); ++i) obs.push_back({i + 1, yz[i].first, yz[i].second});
  return ShipmentSeries(std::move(obs));
}

}  // namespace

// --- CUSUM core -------------------------------------------------------------

TEST(CusumStep, Examples) {
  EXPECT_EQ(cusum_step(0.0, -1.0), 0.0);
  EXPECT_EQ(cusum_step(2.5, 0.5), 3.0);
}

TEST(CusumStep, BruteForceOracle) {
  RngStream r(1, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + r.below(200);
    std::vector<double> llr(n);
    for (auto& x : llr) x = r.normal(-0.2, 1.5);
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      s = cusum_step(s, llr[t]);
      ASSERT_GE(s, 0.0);
      const double ref = oracle::cusum_brute_force(std::span(llr).first(t + 1));
      ASSERT_NEAR(s, ref, 1e-9 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(GlrShift, Examples) {
  const stats::GaussianParams g{2.0, 0.5};
  const ShiftSpec s{0.5, 3.0};
  EXPECT_DOUBLE_EQ(glr_shift_llr(2.0, g, s), -0.125);
  const double interior = 2.0 + 0.5 * (0.5 + 3.0) / 2;
  EXPECT_DOUBLE_EQ(glr_shift_llr(interior, g, s), (0.5 + 3.0) * (0.5 + 3.0) / 8);
  for (double x : {-10.0, 0.0, 2.0, 3.3, 100.0}) EXPECT_EQ(glr_shift_llr(x, g, ShiftSpec{0, 0}), 0.0);
}

TEST(GlrShift, MatchesLogDensityRatio) {
  const stats::GaussianParams g{1.0, 0.3};
  const ShiftSpec s{0.5, 3.0};
  for (double x = -1; x < 4; x += 0.173) {
    EXPECT_NEAR(glr_shift_llr(x, g, s), shifted_log_pdf(x, g, s) - g.log_pdf(x), 1e-12);
  }
}

TEST(GlrShift, NondecreasingAboveMean) {
  RngStream r(2, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const stats::GaussianParams g{r.normal(), 0.1 + r.uniform()};
    const double a = r.uniform(), b = a + 3 * r.uniform();
    std::vector<double> xs(100);
    for (auto& x : xs) x = g.mean + 6 * g.std * r.uniform();
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < xs.size(); ++i) {
      EXPECT_LE(glr_shift_llr(xs[i - 1], g, {a, b}), glr_shift_llr(xs[i], g, {a, b}) + 1e-12);
    }
  }
}

TEST(ShiftSpec, Validate) {
  EXPECT_NO_THROW(validate(ShiftSpec{0, 0}));
  EXPECT_THROW(validate(ShiftSpec{-0.1, 1}), ConfigError);
  EXPECT_THROW(validate(ShiftSpec{2, 1}), ConfigError);
  EXPECT_THROW(validate(ShiftSpec{0, kInf}), ConfigError);
}

// --- KS ---------------------------------------------------------------------

TEST(FastNormalCdf, MatchesErfc) {
  for (double z = -12; z <= 12; z += 0.0137) {
    EXPECT_NEAR(fast_normal_cdf(z), stats::normal_cdf(z), 1e-11) << z;
  }
}

TEST(TrainKs, BaselineMedianAndErrors) {
  const auto& tr = paper_data().training.series;
  const auto m = train_ks(tr, 50);
  auto med = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  EXPECT_NEAR(m.baseline_duration(med(tr.durations())), 0.5, 0.1);
  // Powers split into two tight clusters, so the sample median sits on a
  // cluster edge; the smoothed CDF crosses one half in the gap between them.
  EXPECT_NEAR(m.baseline_power(0.15), 0.5, 0.1);
  EXPECT_THROW(train_ks(tr, 1), TrainingError);
  EXPECT_THROW(train_ks(series_of({{1, 1}, {2, 2}, {3, 3}}), 2), TrainingError);
}

TEST(TrainKs, BaselineNondecreasing) {
  const auto m = train_ks(paper_data().training.series, 50);
  RngStream r(3, 0);
  std::vector<double> grid(500);
  for (auto& g : grid) g = 60 * r.uniform();
  std::sort(grid.begin(), grid.end());
  for (std::size_t i = 1; i < grid.size(); ++i)
    EXPECT_LE(m.baseline_duration(grid[i - 1]), m.baseline_duration(grid[i]));
}

TEST(KsBaselineTable, MatchesExactCdf) {
  const auto m = train_ks(paper_data().training.series, 50);
  for (double y = 0; y < 70; y += 0.0731) {
    EXPECT_NEAR((*m.duration_table)(y), m.baseline_duration(y), 1e-10);
  }
  for (double z = 0.05; z < 0.25; z += 0.000173) {
    EXPECT_NEAR((*m.power_table)(z), m.baseline_power(z), 1e-10);
  }
}

TEST(KsStep, WarmUp) {
  const auto m = train_ks(paper_data().training.series, 50);
  KsState st;
  for (std::size_t i = 0; i < 49; ++i) {
    EXPECT_EQ(ks_step(m, st, paper_data().test.series[i], 0.0), Verdict::kContinue);
    EXPECT_FALSE(st.statistic().has_value());
  }
  EXPECT_EQ(ks_step(m, st, paper_data().test.series[49], 0.0), Verdict::kAlarm);
  EXPECT_EQ(st.clock.alarm_time, 50u);
}

TEST(KsStep, InRangeNeverAlarmsAboveOne) {
  const auto m = train_ks(paper_data().training.series, 50);
  KsState st;
  for (const auto& o : paper_data().test.series) {
    EXPECT_EQ(ks_step(m, st, o, 1.01), Verdict::kContinue);
    if (st.statistic()) {
      EXPECT_GE(*st.d_stat, 0.0);
      EXPECT_LE(*st.d_stat, 1.0);
      EXPECT_GE(*st.e_stat, 0.0);
      EXPECT_LE(*st.e_stat, 1.0);
    }
  }
}

TEST(KsStep, ShiftedWindowAlarms) {
  const auto& tr = paper_data().training.series;
  const auto m = train_ks(tr, 50);
  const auto sd = stats::sample_std(tr.durations());
  KsState st;
  Verdict v = Verdict::kContinue;
  for (std::size_t i = 0; i < 50; ++i) {
    auto o = tr[i];
    o.duration_days += 10 * sd;
    v = ks_step(m, st, o, 0.5);
  }
  EXPECT_EQ(v, Verdict::kAlarm);
  EXPECT_GT(*st.d_stat, 0.9);
}

TEST(KsStep, FastStatisticMatchesExhaustive) {
  const auto m = train_ks(paper_data().training.series, 50);
  const auto& test = paper_data().test.series;
  for (std::size_t end = 50; end <= test.size(); end += 97) {
    std::vector<double> y, z;
    for (std::size_t i = end - 50; i < end; ++i) {
      y.push_back(test[i].duration_days);
      z.push_back(test[i].power);
    }
    const auto fast = ks_window_statistics(m, y, z);
    const double d = stats::ks_distance(stats::make_kernel_cdf(y), m.baseline_duration);
    const double e = stats::ks_distance(stats::make_kernel_cdf(z), m.baseline_power);
    EXPECT_NEAR(fast.d, d, 1e-3) << end;
    EXPECT_NEAR(fast.e, e, 1e-3) << end;
  }
}

TEST(KsStep, FrozenAfterAlarm) {
  const auto m = train_ks(paper_data().training.series, 10);
  KsState st;
  for (std::size_t i = 0; i < 10; ++i) ks_step(m, st, paper_data().test.series[i], 0.0);
  const auto snapshot = st.statistic();
  ks_step(m, st, paper_data().test.series[10], 0.0);
  EXPECT_EQ(st.clock.t, 10u);
  EXPECT_EQ(st.statistic(), snapshot);
}

// --- G-CUSUM ------------------------------------------------------------------

TEST(TrainGCusum, FitsSampleMoments) {
  const auto& tr = paper_data().training.series;
  const ShiftSpec s{0.25, 2.0};
  const auto m = train_g_cusum(tr, s);
  EXPECT_NEAR(m.duration_g0.mean, stats::sample_mean(tr.durations()), 1e-12);
  EXPECT_NEAR(m.power_g0.std, stats::sample_std(tr.powers()), 1e-12);
  EXPECT_EQ(m.shift, s);
}

TEST(TrainGCusum, ConstantDataFails) {
  std::vector<std::pair<double, double>> yz(20, {30.0, 0.1});
  EXPECT_THROW(train_g_cusum(series_of(yz), {}), EstimationError);
  EXPECT_THROW(train_g_cusum(series_of({{1, 1}, {2, 2}}), {}), TrainingError);
}

TEST(GCusumStep, AtMeansStaysZero) {
  const GCusumModel m{{30, 5}, {0.15, 0.05}, {0.5, 3.0}};
  DualCusumState st;
  for (std::size_t i = 1; i <= 1000; ++i) {
    EXPECT_EQ(g_cusum_step(m, st, {i, 30, 0.15}, 1.0), Verdict::kContinue);
    EXPECT_EQ(st.duration_stat, 0.0);
    EXPECT_EQ(st.power_stat, 0.0);
  }
}

TEST(GCusumStep, ZeroThresholdAlarmsImmediately) {
  const GCusumModel m{{30, 5}, {0.15, 0.05}, {0.5, 3.0}};
  DualCusumState st;
  EXPECT_EQ(g_cusum_step(m, st, {1, 30, 0.15}, 0.0), Verdict::kAlarm);
  EXPECT_EQ(st.clock.alarm_time, 1u);
}

TEST(GCusumStep, SustainedShiftDelay) {
  const double a = 0.5, b = 3.0, rho = 100.0;
  const GCusumModel m{{10, 1}, {1, 0.1}, {a, b}};
  // Expected per-step llr under y ~ N(10 + b, 1), by midpoint quadrature.
  double rate = 0;
  const double dx = 1e-3;
  for (double u = -12; u < 12; u += dx) {
    const double um = u + dx / 2;
    rate += glr_shift_llr(10 + b + um, m.duration_g0, m.shift) * std::exp(-0.5 * um * um) /
            std::sqrt(2 * std::numbers::pi) * dx;
  }
  EXPECT_GT(rate, b * b / 2 - b * b / 8);
  RngStream r(4, 0);
  double total = 0;
  const int streams = 200;
  for (int k = 0; k < streams; ++k) {
    DualCusumState st;
    std::size_t t = 0;
    while (g_cusum_step(m, st, {++t, 10 + b + r.normal(), 1.0}, rho) == Verdict::kContinue) {
      ASSERT_LT(t, 1000u);
    }
    EXPECT_EQ(st.power_stat, 0.0);
    total += static_cast<double>(t);
  }
  const double mean_delay = total / streams;
  // Wald: E[T] rate = rho + expected overshoot (below one step's llr).
  EXPECT_GE(mean_delay, rho / rate - 0.5);
  EXPECT_LE(mean_delay, (rho + b * b) / rate + 0.5);
}

// --- GM-CUSUM -----------------------------------------------------------------

TEST(TrainGmCusum, DefaultPowersTwoComponents) {
  const auto& m = std::get<GmCusumModel>(*trained(DetectorKind::kGmCusum));
  ASSERT_EQ(m.power_mix.size(), 2u);
  std::vector<double> means{m.power_mix.components[0].mean, m.power_mix.components[1].mean};
  std::sort(means.begin(), means.end());
  EXPECT_NEAR(means[0], 0.1, 0.001);
  EXPECT_NEAR(means[1], 0.2, 0.001);
  EXPECT_EQ(m.shift, ShiftSpec{});
  EXPECT_NO_THROW(stats::validate(m.duration_mix));
}

TEST(TrainGmCusum, ShiftStored) {
  const ShiftSpec s{0.1, 0.9};
  const auto m = train_gm_cusum(paper_data().training.series, s, 2, RngStream(1, 1));
  EXPECT_EQ(m.shift, s);
}

TEST(GmCusumStep, SingleComponentEqualsGCusum) {
  const GCusumModel g = train_g_cusum(paper_data().training.series, {});
  const GmCusumModel gm{{{1.0}, {g.duration_g0}}, {{1.0}, {g.power_g0}}, g.shift};
  DualCusumState sg, sgm;
  for (const auto& o : paper_data().test.series) {
    const auto vg = g_cusum_step(g, sg, o, 50.0);
    const auto vgm = gm_cusum_step(gm, sgm, o, 50.0);
    ASSERT_EQ(vg, vgm);
    ASSERT_NEAR(sg.duration_stat, sgm.duration_stat, 1e-9);
    ASSERT_NEAR(sg.power_stat, sgm.power_stat, 1e-9);
  }
}

TEST(GmCusumStep, AtComponentMean) {
  const stats::GaussianMixture mix{{0.5, 0.5}, {{0.1, 0.001}, {0.2, 0.001}}};
  const ShiftSpec s{0.5, 3.0};
  EXPECT_NEAR(mixture_shift_llr(0.1, mix, s), -0.125, 1e-12);
  EXPECT_NEAR(mixture_shift_llr(0.2, mix, s), -0.125, 1e-12);
  EXPECT_EQ(mixture_shift_llr(0.137, mix, ShiftSpec{0, 0}), 0.0);
}

TEST(GmCusumStep, ZeroShiftStaysZero) {
  auto m = std::get<GmCusumModel>(*trained(DetectorKind::kGmCusum));
  m.shift = {0, 0};
  DualCusumState st;
  for (const auto& o : paper_data().test.series) {
    gm_cusum_step(m, st, o, 1e-12);
    ASSERT_EQ(st.statistic(), 0.0);
  }
  EXPECT_FALSE(st.clock.alarmed());
}

// --- M-CUSUM ------------------------------------------------------------------

TEST(TrainMCusum, DefaultPatterns) {
  const auto& m = std::get<MCusumModel>(*trained(DetectorKind::kMCusum));
  ASSERT_EQ(m.m, 6u);
  ASSERT_EQ(m.energy_g0.size(), 6u);
  ASSERT_EQ(m.power_g0.size(), 6u);
  const auto cfg = default_paper_scenario();
  std::vector<bool> used(6, false);
  for (std::size_t c = 0; c < 6; ++c) {
    std::size_t best = 0;
    double best_d = kInf;
    for (int p = 1; p <= 6; ++p) {
      const auto t = cfg.pattern(p);
      const double d = std::hypot((m.energy_g0[c].mean - t.energy_mean) / t.energy_mean,
                                  (m.power_g0[c].mean - t.power_mean) / t.power_mean);
      if (d < best_d) { best_d = d; best = static_cast<std::size_t>(p - 1); }
    }
    EXPECT_FALSE(used[best]);
    used[best] = true;
    const auto t = cfg.pattern(static_cast<int>(best) + 1);
    EXPECT_NEAR(m.energy_g0[c].mean, t.energy_mean, 0.01 * t.energy_mean);
    EXPECT_NEAR(m.power_g0[c].mean, t.power_mean, 0.01 * t.power_mean);
  }
}

TEST(TrainMCusum, SinglePatternForcedSplit) {
  ScenarioConfig c = default_paper_scenario();
  c.energy_levels = {{3.43, 0.03}};
  c.power_levels = {{0.1, 0.001}};
  c.pattern_probs = {{1.0}};
  const auto tr = generate(c, 200, std::nullopt, RngStream(9, 0));
  MCusumTrainingOptions opts;
  opts.m_min = opts.m_max = 2;
  MCusumTrainingReport report;
  const auto m = train_m_cusum(tr.series, {}, RngStream(9, 1), opts, &report);
  EXPECT_EQ(m.m, 2u);
  ASSERT_EQ(report.cluster_sizes.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_GE(report.cluster_sizes[k], 2u);
    EXPECT_NEAR(m.energy_g0[k].mean, 3.43, 0.05);
    EXPECT_NEAR(m.power_g0[k].mean, 0.1, 0.002);
    EXPECT_GT(m.energy_g0[k].std, 0.0);
  }
}

TEST(TrainMCusum, NeedsEnoughData) {
  const auto tr = generate(default_paper_scenario(), 79, std::nullopt, RngStream(1, 0));
  EXPECT_THROW(train_m_cusum(tr.series, {}, RngStream(1, 1)), TrainingError);
}

TEST(TrainMCusum, TinyClusterNamed) {
  // One far outlier forms its own cluster of size 1.
  std::vector<std::pair<double, double>> yz;
  RngStream r(5, 0);
  for (int i = 0; i < 60; ++i) yz.push_back({34.3 + 0.3 * r.normal(), 0.1 + 0.001 * r.normal()});
  for (int i = 0; i < 59; ++i) yz.push_back({17.15 + 0.15 * r.normal(), 0.2 + 0.001 * r.normal()});
  yz.push_back({500.0, 0.5});
  MCusumTrainingOptions opts;
  opts.m_min = opts.m_max = 3;
  try {
    train_m_cusum(series_of(yz), {}, RngStream(5, 1), opts);
    FAIL() << "expected TrainingError";
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("cluster"), std::string::npos);
  }
}

TEST(MCusumStep, AtClusterMeans) {
  const double a = 0.5;
  const MCusumModel m{{}, 2, {{3.43, 0.03}, {5.29, 0.03}}, {{0.1, 0.001}, {0.2, 0.001}}, {a, 3.0}};
  for (auto [e, z] : {std::pair{3.43, 0.1}, std::pair{5.29, 0.2}}) {
    const ShipmentObservation o{1, e / z, z};
    EXPECT_NEAR(m_cusum_llr(m, o), -a * a, 1e-6);
  }
  MCusumState st;
  for (std::size_t i = 1; i <= 100; ++i) {
    m_cusum_step(m, st, {i, 3.43 / 0.1, 0.1}, 1.0);
    EXPECT_EQ(st.stat, 0.0);
  }
}

TEST(MCusumStep, ZeroShiftNeverAlarms) {
  auto m = std::get<MCusumModel>(*trained(DetectorKind::kMCusum));
  m.shift = {0, 0};
  MCusumState st;
  for (const auto& o : paper_data().test.series) {
    EXPECT_EQ(m_cusum_step(m, st, o, 1e-9), Verdict::kContinue);
    ASSERT_EQ(st.stat, 0.0);
  }
}

TEST(MCusumStep, DiversionLlrLarge) {
  const auto& m = std::get<MCusumModel>(*trained(DetectorKind::kMCusum));
  const auto& test = paper_data().test;
  double sum = 0;
  int n = 0;
  for (std::size_t i = 0; i < test.series.size(); ++i) {
    if (!test.diverted[i]) continue;
    sum += m_cusum_llr(m, test.series[i]);
    ++n;
  }
  ASSERT_GT(n, 300);
  EXPECT_GT(sum / n, 5.0);
  // Moderate threshold: alarm within a handful of diverted shipments.
  const auto alarm = first_alarm(*trained(DetectorKind::kMCusum), test.series, 60.0);
  ASSERT_TRUE(alarm.has_value());
  ASSERT_TRUE(test.change_point.has_value());
  std::size_t diverted_seen = 0;
  for (std::size_t i = *test.change_point - 1; i < *alarm; ++i) diverted_seen += test.diverted[i];
  EXPECT_GE(*alarm, *test.change_point);
  EXPECT_LE(diverted_seen, 8u);
}

// --- Front end ----------------------------------------------------------------

TEST(DetectorKind, Names) {
  for (auto k : {DetectorKind::kKs, DetectorKind::kGCusum, DetectorKind::kGmCusum,
                 DetectorKind::kMCusum}) {
    EXPECT_EQ(parse_kind(kind_name(k)), k);
  }
  EXPECT_THROW(parse_kind("cusum"), ConfigError);
}

TEST(Detector, DeterministicAcrossBatching) {
  for (auto k : {DetectorKind::kKs, DetectorKind::kGCusum, DetectorKind::kGmCusum,
                 DetectorKind::kMCusum}) {
    const auto model = trained(k);
    const double thr = k == DetectorKind::kKs ? 0.25 : 30.0;
    const auto once = first_alarm(*model, paper_data().test.series, thr);
    Detector d(model);
    std::optional<std::size_t> stepwise;
    for (const auto& o : paper_data().test.series) {
      if (d.step(o, thr) == Verdict::kAlarm) { stepwise = d.alarm_time(); break; }
    }
    EXPECT_EQ(once, stepwise) << kind_name(k);
    d.reset();
    EXPECT_EQ(d.steps(), 0u);
    EXPECT_FALSE(d.alarm_time().has_value());
    EXPECT_EQ(first_alarm(*model, paper_data().test.series, thr), once);
  }
}

TEST(Detector, ThresholdMonotone) {
  for (auto k : {DetectorKind::kKs, DetectorKind::kGCusum, DetectorKind::kGmCusum,
                 DetectorKind::kMCusum}) {
    const auto model = trained(k);
    std::vector<double> thr = k == DetectorKind::kKs
                                  ? std::vector<double>{0.1, 0.15, 0.2, 0.25, 0.3, 0.5}
                                  : std::vector<double>{0.0, 1.0, 5.0, 20.0, 50.0, 200.0};
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto stream =
          generate(default_paper_scenario(), 3000, 1001, RngStream(100 + s, 0)).series;
      std::size_t prev = 0;
      for (double h : thr) {
        const auto a = first_alarm(*model, stream, h).value_or(stream.size() + 1);
        EXPECT_GE(a, prev) << kind_name(k) << " h=" << h;
        prev = a;
      }
    }
  }
}

TEST(Detector, CusumStatisticsNonNegative) {
  for (auto k : {DetectorKind::kGCusum, DetectorKind::kGmCusum, DetectorKind::kMCusum}) {
    Detector d(trained(k));
    for (const auto& o : paper_data().test.series) {
      const auto s = d.advance(o);
      ASSERT_TRUE(s.has_value());
      ASSERT_GE(*s, 0.0);
    }
  }
}

TEST(ModelJson, RoundTripAllKinds) {
  for (auto k : {DetectorKind::kKs, DetectorKind::kGCusum, DetectorKind::kGmCusum,
                 DetectorKind::kMCusum}) {
    const auto& model = *trained(k);
    const auto doc = model_to_json(model);
    EXPECT_EQ(doc.at("kind").get<std::string>(), kind_name(k));
    const auto back = model_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_TRUE(back == model) << kind_name(k);
    EXPECT_EQ(first_alarm(back, paper_data().test.series, k == DetectorKind::kKs ? 0.25 : 30.0),
              first_alarm(model, paper_data().test.series, k == DetectorKind::kKs ? 0.25 : 30.0));
  }
}

TEST(ModelJson, Malformed) {
  EXPECT_THROW(model_from_json(nlohmann::json::object()), ConfigError);
  EXPECT_THROW(model_from_json({{"kind", "bogus"}}), ConfigError);
  EXPECT_THROW(model_from_json({{"kind", "g_cusum"}}), ConfigError);
  EXPECT_THROW(read_model_file("/nonexistent/model.json"), IoError);
}
