#pragma once

/// \file cusum.hpp
/// CUSUM recursion and the mean-shift generalized log-likelihood ratio
/// shared by the G-, GM- and M-CUSUM detectors.

#include <algorithm>
#include <cstddef>
#include <optional>

#include "dsentry/stats/gaussian.hpp"

namespace dsentry::detectors {

enum class Verdict { kContinue, kAlarm };

/// Post-change feasible means: [mu0 + lower_mult * sigma, mu0 + upper_mult * sigma].
struct ShiftSpec {
  double lower_mult = 0.5;
  double upper_mult = 3.0;

  friend bool operator==(const ShiftSpec&, const ShiftSpec&) = default;
};

/// Throws ConfigError unless 0 <= lower_mult <= upper_mult (finite).
void validate(const ShiftSpec& shift);

/// Page's recursion: max(0, s + llr).
inline double cusum_step(double s, double llr) noexcept { return std::max(0.0, s + llr); }

/// Maximum-likelihood post-change mean: x clamped to the feasible interval.
inline double shifted_mean(double x, const stats::GaussianParams& g0, const ShiftSpec& shift) noexcept {
  return std::clamp(x, g0.mean + shift.lower_mult * g0.std, g0.mean + shift.upper_mult * g0.std);
}

/// log f(x | mu*, sigma) - log f(x | mu0, sigma)
///   = [(x - mu0)^2 - (x - mu*)^2] / (2 sigma^2).
inline double glr_shift_llr(double x, const stats::GaussianParams& g0, const ShiftSpec& shift) noexcept {
  const double mu_star = shifted_mean(x, g0, shift);
  const double d0 = x - g0.mean;
  const double d1 = x - mu_star;
  return (d0 * d0 - d1 * d1) / (2.0 * g0.std * g0.std);
}

/// log f(x | mu*, sigma), the post-change density at its ML mean.
inline double shifted_log_pdf(double x, const stats::GaussianParams& g0, const ShiftSpec& shift) noexcept {
  return stats::GaussianParams{shifted_mean(x, g0, shift), g0.std}.log_pdf(x);
}

/// Common bookkeeping for the streaming detectors. `t` counts consumed
/// observations; once `alarm_time` is set the detector ignores further input.
struct StreamClock {
  std::size_t t = 0;
  std::optional<std::size_t> alarm_time;

  bool alarmed() const noexcept { return alarm_time.has_value(); }
};

}  // namespace dsentry::detectors
