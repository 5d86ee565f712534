#include <gtest/gtest.h>

#include <cmath>

#include "dsentry/core.hpp"
#include "dsentry/enrichment.hpp"
#include "dsentry/rng.hpp"

using namespace dsentry;
using namespace dsentry::enrichment;

namespace {

// Closed-form separative work written out independently of the library.
double swu_oracle(double xf, double xp, double xt, double p) {
  auto v = [](double x) { return (2 * x - 1) * std::log(x / (1 - x)); };
  const double f = p * (xp - xt) / (xf - xt);
  const double t = f - p;
  return p * v(xp) + t * v(xt) - f * v(xf);
}

EnrichmentSpec spec(double product, double mass) {
  return {kNaturalFeedAssay, product, kDefaultTailsAssay, mass};
}

}  // namespace

TEST(ValueFunction, Examples) {
  EXPECT_EQ(value_function(0.5), 0.0);
  EXPECT_NEAR(value_function(0.003), 5.771301650405966, 1e-12);
  EXPECT_NEAR(value_function(0.90), 1.7577796618689758, 1e-12);
}

TEST(ValueFunction, Symmetric) {
  RngStream r(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = 1e-6 + (1 - 2e-6) * r.uniform();
    EXPECT_NEAR(value_function(x), value_function(1 - x), 1e-12);
  }
}

TEST(ValueFunction, Domain) {
  EXPECT_THROW(value_function(0.0), DomainError);
  EXPECT_THROW(value_function(1.0), DomainError);
  EXPECT_THROW(value_function(-0.2), DomainError);
}

TEST(SeparativeWork, MatchesOracle) {
  EXPECT_NEAR(separative_work(spec(0.03, 1000)), swu_oracle(0.00711, 0.03, 0.003, 1000), 1e-9);
  EXPECT_NEAR(separative_work(spec(0.90, 1)), swu_oracle(0.00711, 0.90, 0.003, 1), 1e-12);
}

TEST(SeparativeWork, ThreePercentTonne) {
  const double swu = separative_work(spec(0.03, 1000));
  EXPECT_NEAR(swu, 3424.53, 0.01);
  EXPECT_LT(std::abs(swu / kKgSwuPerMtswu - 3.43) / 3.43, 0.01);
}

TEST(SeparativeWork, HeuKilogram) {
  const double swu = separative_work(spec(0.90, 1));
  EXPECT_NEAR(swu, 192.938, 0.001);
  EXPECT_LT(std::abs(swu / kKgSwuPerMtswu - 0.1934) / 0.1934, 0.01);
}

TEST(SeparativeWork, CalibrationConstants) {
  const struct {
    double product, mass, mtswu;
  } cases[] = {{0.03, 1000, 3.43}, {0.035, 1000, 4.35}, {0.04, 1000, 5.29}, {0.90, 1, 0.1934}};
  for (const auto& c : cases) {
    const double got = separative_work(spec(c.product, c.mass)) / kKgSwuPerMtswu;
    EXPECT_LT(std::abs(got - c.mtswu) / c.mtswu, 0.01) << c.product;
  }
}

TEST(SeparativeWork, VanishesWithoutEnrichment) {
  double prev = separative_work(spec(kNaturalFeedAssay + 1e-2, 1000));
  // Vanishes linearly in the assay gap.
  for (double eps : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9}) {
    const double w = separative_work(spec(kNaturalFeedAssay + eps, 1000));
    EXPECT_GE(w, 0.0);
    EXPECT_LT(w, prev);
    prev = w;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(SeparativeWork, HomogeneousInMass) {
  RngStream r(4, 4);
  for (int i = 0; i < 100; ++i) {
    const double p = 0.01 + 0.98 * r.uniform();
    const double m = 0.1 + 1000 * r.uniform();
    const double a = separative_work(spec(p, m));
    const double b = separative_work(spec(p, 2 * m));
    EXPECT_NEAR(b / a, 2.0, 1e-9);
  }
}

TEST(SeparativeWork, RejectsBadAssayOrder) {
  EXPECT_THROW(separative_work({0.00711, 0.005, 0.003, 1000}), DomainError);
  EXPECT_THROW(separative_work({0.003, 0.03, 0.003, 1000}), DomainError);
  EXPECT_THROW(separative_work({0.00711, 0.03, 0.003, 0}), DomainError);
  EXPECT_THROW(separative_work({0.00711, 1.0, 0.003, 10}), DomainError);
}

TEST(MassBalance, FeedEqualsProductPlusTails) {
  RngStream r(5, 5);
  for (int i = 0; i < 100; ++i) {
    const EnrichmentSpec s = spec(0.01 + 0.9 * r.uniform(), 1 + 100 * r.uniform());
    const auto mb = mass_balance(s);
    EXPECT_EQ(mb.feed_kg, s.product_mass_kg + mb.tails_kg);
    EXPECT_NEAR(mb.feed_kg * s.feed_assay,
                s.product_mass_kg * s.product_assay + mb.tails_kg * s.tails_assay,
                1e-9 * mb.feed_kg);
  }
}

TEST(ProductionDuration, Examples) {
  EXPECT_EQ(production_duration(3.43, 0.1), 34.3);
  EXPECT_EQ(production_duration(3.43, 0.2), 17.15);
  EXPECT_EQ(production_duration(0.0, 0.1), 0.0);
  EXPECT_THROW(production_duration(3.43, 0.0), DomainError);
  EXPECT_THROW(production_duration(3.43, -1.0), DomainError);
}
