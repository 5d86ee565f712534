#pragma once

/// \file mixture.hpp
/// Univariate Gaussian mixtures fitted by EM, with BIC order selection.

#include <cstddef>
#include <span>
#include <vector>

#include "dsentry/rng.hpp"
#include "dsentry/stats/gaussian.hpp"

namespace dsentry::stats {

struct GaussianMixture {
  std::vector<double> weights;
  std::vector<GaussianParams> components;

  std::size_t size() const noexcept { return components.size(); }
  double log_pdf(double x) const;
  double log_likelihood(std::span<const double> xs) const;

  friend bool operator==(const GaussianMixture&, const GaussianMixture&) = default;
};

/// Throws EstimationError unless weights are >= 0, sum to 1 within 1e-9,
/// and every std is > 0.
void validate(const GaussianMixture& mixture);

struct EmOptions {
  int max_iterations = 500;
  double relative_tolerance = 1e-8;
};

struct GmmFit {
  GaussianMixture mixture;
  double log_likelihood = 0.0;
  std::vector<double> log_likelihood_trace;  // one entry per EM iteration
  int iterations = 0;
};

/// EM from k-means-initialised hard responsibilities. Variances use the
/// responsibility-weighted population form, floored at 1e-9 * data range.
/// Needs at least 2k samples.
GmmFit fit_gmm(std::span<const double> samples, std::size_t k, const RngStream& rng,
               const EmOptions& options = {});

/// -2 loglik + (3k - 1) ln n.
double bic(double log_likelihood, std::size_t k, std::size_t n);

struct BicSelection {
  std::size_t k = 0;
  GmmFit fit;
  std::vector<double> bic_values;  // for k = 1..k_max
};

/// fit_gmm for k = 1..k_max (substream k each), keeps the minimum BIC.
BicSelection select_gmm_bic(std::span<const double> samples, std::size_t k_max,
                            const RngStream& rng, const EmOptions& options = {});

}  // namespace dsentry::stats
