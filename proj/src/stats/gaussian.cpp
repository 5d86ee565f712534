#include "dsentry/stats/gaussian.hpp"

#include <string>

#include "dsentry/core.hpp"

namespace dsentry::stats {

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw EstimationError("mean of an empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) {
    throw EstimationError("need at least 2 samples, got " + std::to_string(xs.size()));
  }
  const double mean = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

GaussianParams fit_gaussian(std::span<const double> samples) {
  const double std = sample_std(samples);
  if (!(std > 0.0)) throw EstimationError("zero variance sample");
  return {sample_mean(samples), std};
}

}  // namespace dsentry::stats
