#include "dsentry/stats/kernel_cdf.hpp"

#include <algorithm>
#include <cmath>

#include "dsentry/core.hpp"
#include "dsentry/stats/gaussian.hpp"

namespace dsentry::stats {

double silverman_bandwidth(std::span<const double> samples) {
  const double sd = sample_std(samples);
  if (!(sd > 0.0)) throw EstimationError("bandwidth undefined for zero-variance sample");
  return 1.06 * sd * std::pow(static_cast<double>(samples.size()), -0.2);
}

double KernelCdf::operator()(double x) const {
  if (sample_points.empty()) return 0.0;
  double acc = 0.0;
  for (double xi : sample_points) acc += normal_cdf((x - xi) / bandwidth);
  return acc / static_cast<double>(sample_points.size());
}

KernelCdf make_kernel_cdf(std::span<const double> samples) {
  return make_kernel_cdf(samples, silverman_bandwidth(samples));
}

KernelCdf make_kernel_cdf(std::span<const double> samples, double bandwidth) {
  if (!(bandwidth > 0.0)) throw EstimationError("kernel bandwidth must be > 0");
  KernelCdf cdf{{samples.begin(), samples.end()}, bandwidth};
  std::sort(cdf.sample_points.begin(), cdf.sample_points.end());
  return cdf;
}

std::vector<double> ks_candidates(const KernelCdf& a, const KernelCdf& b) {
  std::vector<double> merged;
  merged.reserve(a.sample_points.size() + b.sample_points.size());
  std::merge(a.sample_points.begin(), a.sample_points.end(), b.sample_points.begin(),
             b.sample_points.end(), std::back_inserter(merged));
  if (merged.empty()) return {};
  const double h = std::max(a.bandwidth, b.bandwidth);

  std::vector<double> out;
  out.reserve(2 * merged.size() + 1);
  out.push_back(merged.front() - 10.0 * h);
  for (std::size_t i = 0; i < merged.size(); ++i) {
    out.push_back(merged[i]);
    if (i + 1 < merged.size()) out.push_back(0.5 * (merged[i] + merged[i + 1]));
  }
  out.push_back(merged.back() + 10.0 * h);
  return out;
}

namespace {

/// Golden-section maximization of f on [lo, hi].
template <class F>
double golden_max(F f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  double best = std::max(f1, f2);
  for (int it = 0; it < 64 && hi - lo > 0.0; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
      best = std::max(best, f2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
      best = std::max(best, f1);
    }
  }
  return best;
}

}  // namespace

double ks_distance(const KernelCdf& a, const KernelCdf& b) {
  const auto cand = ks_candidates(a, b);
  if (cand.empty()) return 0.0;
  auto gap = [&](double x) { return std::abs(a(x) - b(x)); };

  // Gaps wider than a quarter of the narrower bandwidth get extra points.
  const double step = 0.25 * std::min(a.bandwidth, b.bandwidth);
  std::vector<double> xs;
  xs.reserve(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    xs.push_back(cand[i]);
    if (i + 1 == cand.size()) break;
    const double width = cand[i + 1] - cand[i];
    const auto extra = static_cast<std::size_t>(std::ceil(width / step));
    for (std::size_t k = 1; k < extra; ++k) {
      xs.push_back(cand[i] + width * static_cast<double>(k) / static_cast<double>(extra));
    }
  }
  std::vector<double> vs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = gap(xs[i]);

  double best = *std::max_element(vs.begin(), vs.end());
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1] && vs[i] > 0.0) {
      best = std::max(best, golden_max(gap, xs[i - 1], xs[i + 1]));
    }
  }
  return std::min(best, 1.0);
}

}  // namespace dsentry::stats
