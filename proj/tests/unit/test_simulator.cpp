#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "dsentry/core.hpp"
#include "dsentry/scenario_json.hpp"
#include "dsentry/simulator.hpp"

using namespace dsentry;

TEST(DefaultScenario, Patterns) {
  const auto c = default_paper_scenario();
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(c.pattern_count(), 6u);
  EXPECT_EQ(c.diversion_energy_add, 0.1934);
  EXPECT_EQ(c.diversion_power_add, 0.001);
  EXPECT_EQ(c.training_length, 1000u);
  EXPECT_EQ(c.test_length, 3000u);
  EXPECT_EQ(c.change_point, 1001u);
  EXPECT_EQ(c.diversion_prob, 0.2);
  std::set<double> diverted_power;
  for (const auto& p : c.power_levels) diverted_power.insert(p.mean + c.diversion_power_add);
  EXPECT_NEAR(*diverted_power.begin(), 0.101, 1e-15);
  EXPECT_NEAR(*diverted_power.rbegin(), 0.201, 1e-15);
  for (int id = 1; id <= 6; ++id) {
    const auto p = c.pattern(id);
    EXPECT_GT(p.energy_mean, 0);
    EXPECT_EQ(p.energy_std, 0.03);
    EXPECT_EQ(p.power_std, 0.001);
  }
  EXPECT_EQ(c.pattern(1).energy_mean, 3.43);
  EXPECT_EQ(c.pattern(1).power_mean, 0.1);
  EXPECT_EQ(c.pattern(2).power_mean, 0.2);
  EXPECT_EQ(c.pattern(6).energy_mean, 5.29);
}

TEST(ScenarioValidate, Invariants) {
  auto c = default_paper_scenario();
  c.pattern_probs[0][0] -= 0.1;
  EXPECT_THROW(validate(c), ConfigError);
  c = default_paper_scenario();
  c.change_point = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c.change_point = c.test_length + 2;
  EXPECT_THROW(validate(c), ConfigError);
  c.change_point = c.test_length + 1;
  EXPECT_NO_THROW(validate(c));
  EXPECT_FALSE(c.test_change_point().has_value());
  c = default_paper_scenario();
  c.diversion_prob = 1.5;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Generate, ShortCleanStream) {
  const auto c = default_paper_scenario();
  const auto l = generate(c, 4, std::nullopt, RngStream(11, 0));
  ASSERT_EQ(l.series.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_FALSE(l.diverted[i]);
    const auto& o = l.series[i];
    EXPECT_EQ(o.t, i + 1);
    EXPECT_EQ(energy_of(o), o.duration_days * o.power);
  }
  EXPECT_FALSE(l.change_point.has_value());
  EXPECT_NO_THROW(validate(l));
}

TEST(Generate, ZeroDiversionProbability) {
  auto c = default_paper_scenario();
  c.diversion_prob = 0.0;
  const auto l = generate(c, 500, 1, RngStream(1, 1));
  for (bool d : l.diverted) EXPECT_FALSE(d);
  EXPECT_FALSE(l.change_point.has_value());
}

TEST(Generate, PowerMeanLawOfLargeNumbers) {
  const auto c = default_paper_scenario();
  const std::size_t n = 10000;
  const auto l = generate(c, n, std::nullopt, RngStream(12, 0));
  double s = 0;
  for (const auto& o : l.series) s += o.power;
  // mixture std: sqrt(0.05^2 + 0.001^2)
  const double sd = std::sqrt(0.05 * 0.05 + 0.001 * 0.001);
  EXPECT_NEAR(s / n, 0.15, 5 * sd / std::sqrt(static_cast<double>(n)));
}

TEST(Generate, Determinism) {
  const auto c = default_paper_scenario();
  EXPECT_EQ(generate(c, 300, 100, RngStream(5, 6)), generate(c, 300, 100, RngStream(5, 6)));
  EXPECT_NE(generate(c, 300, 100, RngStream(5, 6)), generate(c, 300, 100, RngStream(5, 7)));
}

TEST(Generate, LabelSoundness) {
  const auto c = default_paper_scenario();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto l = generate(c, 400, 150, RngStream(seed, 3));
    for (std::size_t i = 0; i < l.series.size(); ++i) {
      if (l.diverted[i]) EXPECT_GE(i + 1, 150u);
    }
    EXPECT_NO_THROW(validate(l));
  }
}

TEST(Generate, PerPatternMoments) {
  const auto c = default_paper_scenario();
  const auto l = generate(c, 60000, std::nullopt, RngStream(13, 0));
  std::vector<double> se(7, 0), sz(7, 0), cnt(7, 0);
  for (std::size_t i = 0; i < l.series.size(); ++i) {
    const int p = l.pattern[i];
    se[p] += energy_of(l.series[i]);
    sz[p] += l.series[i].power;
    cnt[p] += 1;
  }
  for (int p = 1; p <= 6; ++p) {
    ASSERT_GE(cnt[p], 9000);
    const auto truth = c.pattern(p);
    EXPECT_NEAR(se[p] / cnt[p], truth.energy_mean, 5 * truth.energy_std / std::sqrt(cnt[p]));
    EXPECT_NEAR(sz[p] / cnt[p], truth.power_mean, 5 * truth.power_std / std::sqrt(cnt[p]));
  }
}

TEST(Generate, DiversionAddsFixedIncrement) {
  auto c = default_paper_scenario();
  c.diversion_prob = 0.5;
  const auto clean = generate(c, 500, std::nullopt, RngStream(21, 0));
  const auto dirty = generate(c, 500, 1, RngStream(21, 0));
  std::size_t n_div = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    EXPECT_EQ(clean.pattern[i], dirty.pattern[i]);
    const auto& a = clean.series[i];
    const auto& b = dirty.series[i];
    if (dirty.diverted[i]) {
      ++n_div;
      EXPECT_NEAR(energy_of(b) - energy_of(a), c.diversion_energy_add, 1e-12);
      EXPECT_NEAR(b.power - a.power, c.diversion_power_add, 1e-15);
    } else {
      EXPECT_EQ(a, b);
    }
  }
  EXPECT_GT(n_div, 200u);
  EXPECT_LT(n_div, 300u);
}

TEST(TrainingAndTest, DefaultShapes) {
  const auto c = default_paper_scenario();
  const auto tt = generate_training_and_test(c, RngStream(7, 0));
  EXPECT_EQ(tt.training.series.size(), 1000u);
  for (bool d : tt.training.diverted) EXPECT_FALSE(d);
  EXPECT_EQ(tt.test.series.size(), 3000u);
  for (std::size_t i = 0; i < 1000; ++i) EXPECT_FALSE(tt.test.diverted[i]);
  ASSERT_TRUE(tt.test.change_point.has_value());
  EXPECT_GE(*tt.test.change_point, 1001u);
}

TEST(TrainingAndTest, DiversionFrequency) {
  const auto c = default_paper_scenario();
  double div = 0, post = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto tt = generate_training_and_test(c, RngStream(s, 0));
    for (std::size_t i = 1000; i < 3000; ++i) div += tt.test.diverted[i] ? 1 : 0;
    post += 2000;
  }
  const double p = div / post;
  EXPECT_NEAR(p, 0.2, 5 * std::sqrt(0.2 * 0.8 / post));
}

TEST(TrainingAndTest, EmptyTest) {
  auto c = default_paper_scenario();
  c.test_length = 0;
  c.change_point = 1;
  const auto tt = generate_training_and_test(c, RngStream(1, 0));
  EXPECT_TRUE(tt.test.series.empty());
  EXPECT_EQ(tt.training.series.size(), 1000u);
}

TEST(ScenarioJson, RoundTrip) {
  auto c = default_paper_scenario();
  c.test_length = 500;
  c.change_point = 200;
  c.diversion_prob = 0.3;
  EXPECT_EQ(scenario_from_json(scenario_to_json(c)), c);
}

TEST(ScenarioJson, DefaultsAndErrors) {
  EXPECT_EQ(scenario_from_json(nlohmann::json::object()), default_paper_scenario());
  auto doc = scenario_to_json(default_paper_scenario());
  doc["pattern_probs"] = {{0.1, 0.1}, {0.1, 0.2}, {0.2, 0.2}};
  EXPECT_THROW(scenario_from_json(doc), ConfigError);
  doc = scenario_to_json(default_paper_scenario());
  doc["training_length"] = "many";
  EXPECT_THROW(scenario_from_json(doc), ConfigError);
}
