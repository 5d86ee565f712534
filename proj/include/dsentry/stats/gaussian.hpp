#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace dsentry::stats {

struct GaussianParams {
  double mean = 0.0;
  double std = 1.0;

  double log_pdf(double x) const noexcept {
    const double z = (x - mean) / std;
    return -0.5 * z * z - std::log(std) - 0.5 * std::log(2.0 * std::numbers::pi);
  }

  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

/// Standard normal CDF.
inline double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double sample_mean(std::span<const double> xs);
/// n - 1 divisor. Requires at least two samples.
double sample_std(std::span<const double> xs);

/// Sample mean and (n - 1)-divisor standard deviation. Throws
/// EstimationError for fewer than two samples or zero variance.
GaussianParams fit_gaussian(std::span<const double> samples);

}  // namespace dsentry::stats
