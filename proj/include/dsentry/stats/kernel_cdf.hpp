#pragma once

/// \file kernel_cdf.hpp
/// Gaussian-kernel CDF estimates and the Kolmogorov-Smirnov distance
/// between them.

#include <span>
#include <vector>

namespace dsentry::stats {

/// Silverman's rule, h = 1.06 * sd * n^(-1/5). Throws EstimationError for
/// fewer than two samples or zero spread.
double silverman_bandwidth(std::span<const double> samples);

/// F(x) = (1/n) sum_i Phi((x - x_i) / h).
struct KernelCdf {
  std::vector<double> sample_points;  // sorted ascending
  double bandwidth = 1.0;

  double operator()(double x) const;
};

/// Sorts the samples and attaches the Silverman bandwidth.
KernelCdf make_kernel_cdf(std::span<const double> samples);
KernelCdf make_kernel_cdf(std::span<const double> samples, double bandwidth);

inline double kernel_cdf_eval(const KernelCdf& cdf, double x) { return cdf(x); }

/// Candidate abscissae for the supremum: the sorted union of both sample
/// sets, midpoints of consecutive union points, and min - 10h, max + 10h with
/// h the larger bandwidth.
std::vector<double> ks_candidates(const KernelCdf& a, const KernelCdf& b);

/// sup_x |A(x) - B(x)|. Evaluates ks_candidates(a, b), fills gaps wider than
/// a quarter of the smaller bandwidth, and refines every local maximum by
/// golden-section search.
double ks_distance(const KernelCdf& a, const KernelCdf& b);

}  // namespace dsentry::stats
