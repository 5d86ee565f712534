#include "dsentry/stats/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dsentry/core.hpp"
#include "dsentry/stats/clustering.hpp"

namespace dsentry::stats {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> xs) {
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

/// M-step from an n-by-k responsibility matrix (row-major).
void maximize(std::span<const double> xs, const std::vector<double>& resp, std::size_t k,
              double std_floor, GaussianMixture& mix) {
  const std::size_t n = xs.size();
  for (std::size_t c = 0; c < k; ++c) {
    double nk = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nk += resp[i * k + c];
      sx += resp[i * k + c] * xs[i];
    }
    mix.weights[c] = nk / static_cast<double>(n);
    if (!(nk > 0.0)) continue;  // keep the previous component, weight 0
    const double mean = sx / nk;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = xs[i] - mean;
      ss += resp[i * k + c] * d * d;
    }
    mix.components[c] = {mean, std::max(std::sqrt(ss / nk), std_floor)};
  }
  double total = 0.0;
  for (double w : mix.weights) total += w;
  for (double& w : mix.weights) w /= total;
}

/// E-step; fills responsibilities and returns the log-likelihood.
double expect(std::span<const double> xs, const GaussianMixture& mix, std::vector<double>& resp) {
  const std::size_t k = mix.size();
  std::vector<double> terms(k);
  double ll = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      terms[c] = mix.weights[c] > 0.0 ? std::log(mix.weights[c]) + mix.components[c].log_pdf(xs[i])
                                      : kNegInf;
    }
    const double lse = log_sum_exp(terms);
    ll += lse;
    for (std::size_t c = 0; c < k; ++c) resp[i * k + c] = std::exp(terms[c] - lse);
  }
  return ll;
}

}  // namespace

double GaussianMixture::log_pdf(double x) const {
  std::vector<double> terms(size());
  for (std::size_t c = 0; c < size(); ++c) {
    terms[c] = weights[c] > 0.0 ? std::log(weights[c]) + components[c].log_pdf(x) : kNegInf;
  }
  return log_sum_exp(terms);
}

double GaussianMixture::log_likelihood(std::span<const double> xs) const {
  double ll = 0.0;
  for (double x : xs) ll += log_pdf(x);
  return ll;
}

void validate(const GaussianMixture& mixture) {
  if (mixture.components.empty() || mixture.weights.size() != mixture.components.size()) {
    throw EstimationError("mixture needs one weight per component");
  }
  double total = 0.0;
  for (double w : mixture.weights) {
    if (!(w >= 0.0)) throw EstimationError("mixture weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw EstimationError("mixture weights must sum to 1");
  for (const auto& c : mixture.components) {
    if (!(c.std > 0.0) || !std::isfinite(c.mean)) throw EstimationError("mixture component std must be > 0");
  }
}

GmmFit fit_gmm(std::span<const double> samples, std::size_t k, const RngStream& rng,
               const EmOptions& options) {
  if (k == 0) throw EstimationError("mixture order must be >= 1");
  if (samples.size() < 2 * k) {
    throw EstimationError("mixture of order " + std::to_string(k) + " needs at least " +
                          std::to_string(2 * k) + " samples, got " + std::to_string(samples.size()));
  }
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw EstimationError("zero variance sample");
  const double std_floor = 1e-9 * range;

  std::vector<Point2> points;
  points.reserve(samples.size());
  for (double x : samples) points.push_back({x, 0.0});
  ClusterAssignment init;
  try {
    init = kmeans(points, k, rng);
  } catch (const ClusteringError& e) {
    throw EstimationError(e.what());
  }

  const std::size_t n = samples.size();
  std::vector<double> resp(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) resp[i * k + init.labels[i]] = 1.0;
  GmmFit fit;
  fit.mixture.weights.assign(k, 0.0);
  fit.mixture.components.assign(k, GaussianParams{});
  maximize(samples, resp, k, std_floor, fit.mixture);

  for (int it = 0; it < options.max_iterations; ++it) {
    const double ll = expect(samples, fit.mixture, resp);
    fit.log_likelihood_trace.push_back(ll);
    fit.iterations = it + 1;
    if (it > 0) {
      const double prev = fit.log_likelihood_trace[fit.log_likelihood_trace.size() - 2];
      if (ll - prev < options.relative_tolerance * std::abs(prev)) break;
    }
    if (it + 1 == options.max_iterations) break;
    maximize(samples, resp, k, std_floor, fit.mixture);
  }
  fit.log_likelihood = fit.log_likelihood_trace.back();
  validate(fit.mixture);
  return fit;
}

double bic(double log_likelihood, std::size_t k, std::size_t n) {
  return -2.0 * log_likelihood + static_cast<double>(3 * k - 1) * std::log(static_cast<double>(n));
}

BicSelection select_gmm_bic(std::span<const double> samples, std::size_t k_max,
                            const RngStream& rng, const EmOptions& options) {
  if (k_max == 0) throw EstimationError("k_max must be >= 1");
  BicSelection out;
  for (std::size_t k = 1; k <= k_max; ++k) {
    auto fit = fit_gmm(samples, k, rng.substream(k), options);
    const double b = bic(fit.log_likelihood, k, samples.size());
    out.bic_values.push_back(b);
    if (k == 1 || b < out.bic_values[out.k - 1]) {
      out.k = k;
      out.fit = std::move(fit);
    }
  }
  return out;
}

}  // namespace dsentry::stats
