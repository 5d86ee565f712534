#include "dsentry/stats/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

#include "dsentry/stats/gaussian.hpp"

namespace dsentry::stats {

namespace {

double sq_dist(const Point2& a, const Point2& b) noexcept {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

std::size_t nearest(const Point2& p, std::span<const Point2> centroids) noexcept {
  std::size_t best = 0;
  double best_d = sq_dist(p, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = sq_dist(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::size_t distinct_count(std::span<const Point2> points) {
  std::vector<Point2> copy(points.begin(), points.end());
  std::sort(copy.begin(), copy.end());
  return static_cast<std::size_t>(std::unique(copy.begin(), copy.end()) - copy.begin());
}

std::vector<Point2> seed_plus_plus(std::span<const Point2> points, std::size_t m, RngStream& rng) {
  std::vector<Point2> centroids;
  centroids.reserve(m);
  centroids.push_back(points[rng.below(points.size())]);
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d2[i] = sq_dist(points[i], centroids[0]);
  while (centroids.size() < m) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      // Guard the tail against rounding landing on an already-chosen point.
      while (d2[pick] == 0.0) --pick;
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], sq_dist(points[i], centroids.back()));
    }
  }
  return centroids;
}

void update_centroids(std::span<const Point2> points, std::vector<std::size_t>& labels,
                      std::vector<Point2>& centroids) {
  const std::size_t m = centroids.size();
  std::vector<Point2> sums(m, Point2{0.0, 0.0});
  std::vector<std::size_t> counts(m, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    sums[labels[i]][0] += points[i][0];
    sums[labels[i]][1] += points[i][1];
    ++counts[labels[i]];
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (counts[c] > 0) continue;
    // Empty cluster: take over the point farthest from its own centroid
    // among clusters that can spare one.
    std::size_t victim = points.size();
    double worst = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (counts[labels[i]] < 2) continue;
      const double d = sq_dist(points[i], centroids[labels[i]]);
      if (d > worst) {
        worst = d;
        victim = i;
      }
    }
    const std::size_t from = labels[victim];
    sums[from][0] -= points[victim][0];
    sums[from][1] -= points[victim][1];
    --counts[from];
    labels[victim] = c;
    sums[c] = points[victim];
    counts[c] = 1;
  }
  for (std::size_t c = 0; c < m; ++c) {
    const double n = static_cast<double>(counts[c]);
    centroids[c] = {sums[c][0] / n, sums[c][1] / n};
  }
}

ClusterAssignment lloyd(std::span<const Point2> points, std::size_t m, RngStream rng,
                        const KMeansOptions& options) {
  ClusterAssignment out;
  out.centroids = seed_plus_plus(points, m, rng);
  out.labels.assign(points.size(), 0);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    for (std::size_t i = 0; i < points.size(); ++i) out.labels[i] = nearest(points[i], out.centroids);
    const auto previous = out.centroids;
    update_centroids(points, out.labels, out.centroids);
    out.objective_trace.push_back(wcss(points, out.labels, out.centroids));
    double moved = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      moved = std::max(moved, std::sqrt(sq_dist(previous[c], out.centroids[c])));
    }
    if (moved < options.tolerance) break;
  }
  out.wcss = out.objective_trace.empty() ? wcss(points, out.labels, out.centroids)
                                         : out.objective_trace.back();
  return out;
}

void check_kmeans_args(std::span<const Point2> points, std::size_t m) {
  if (m == 0) throw ClusteringError("k-means needs m >= 1");
  const auto distinct = distinct_count(points);
  if (m > distinct) {
    throw ClusteringError("k-means with m = " + std::to_string(m) + " but only " +
                          std::to_string(distinct) + " distinct points");
  }
}

ClusterAssignment pick_best(std::vector<ClusterAssignment>& runs) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].wcss < runs[best].wcss) best = r;
  }
  return std::move(runs[best]);
}

double point_silhouette(std::span<const Point2> points, std::span<const std::size_t> labels,
                        std::span<const std::size_t> sizes, std::size_t i,
                        std::vector<double>& sums) {
  std::fill(sums.begin(), sums.end(), 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    sums[labels[j]] += std::sqrt(sq_dist(points[i], points[j]));
  }
  const std::size_t own = labels[i];
  if (sizes[own] < 2) return 0.0;
  const double a = sums[own] / static_cast<double>(sizes[own] - 1);
  double b = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (c == own || sizes[c] == 0) continue;
    b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
  }
  const double denom = std::max(a, b);
  return denom > 0.0 ? (b - a) / denom : 0.0;
}

std::vector<std::size_t> cluster_sizes(std::span<const Point2> points,
                                       std::span<const std::size_t> labels) {
  if (labels.size() != points.size()) throw ClusteringError("labels and points differ in length");
  std::size_t m = 0;
  for (auto l : labels) m = std::max(m, l + 1);
  std::vector<std::size_t> sizes(m, 0);
  for (auto l : labels) ++sizes[l];
  const auto nonempty = std::count_if(sizes.begin(), sizes.end(), [](auto s) { return s > 0; });
  if (nonempty < 2) throw ClusteringError("silhouette needs at least two clusters");
  return sizes;
}

double mean_of(const std::vector<double>& values) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

}  // namespace

EmbeddingModel fit_embedding(const ShipmentSeries& series) {
  const auto y = series.durations();
  const auto z = series.powers();
  const double ys = sample_std(y);
  const double zs = sample_std(z);
  if (!(ys > 0.0) || !(zs > 0.0)) throw EstimationError("embedding needs nonzero spread in both modalities");
  return {sample_mean(y), ys, sample_mean(z), zs};
}

Point2 embed(const EmbeddingModel& model, const ShipmentObservation& obs) {
  return {(obs.duration_days - model.duration_center) / model.duration_scale,
          (obs.power - model.power_center) / model.power_scale};
}

std::vector<Point2> embed_all(const EmbeddingModel& model, const ShipmentSeries& series) {
  std::vector<Point2> out;
  out.reserve(series.size());
  for (const auto& o : series) out.push_back(embed(model, o));
  return out;
}

double wcss(std::span<const Point2> points, std::span<const std::size_t> labels,
            std::span<const Point2> centroids) {
  double acc = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) acc += sq_dist(points[i], centroids[labels[i]]);
  return acc;
}

ClusterAssignment kmeans(std::span<const Point2> points, std::size_t m, const RngStream& rng,
                         const KMeansOptions& options) {
  check_kmeans_args(points, m);
  const int restarts = std::max(1, options.restarts);
  std::vector<ClusterAssignment> runs(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    runs[static_cast<std::size_t>(r)] =
        lloyd(points, m, rng.substream(static_cast<std::uint64_t>(r)), options);
  }
  return pick_best(runs);
}

ClusterAssignment kmeans_serial(std::span<const Point2> points, std::size_t m,
                                const RngStream& rng, const KMeansOptions& options) {
  check_kmeans_args(points, m);
  const int restarts = std::max(1, options.restarts);
  std::vector<ClusterAssignment> runs;
  for (int r = 0; r < restarts; ++r) {
    runs.push_back(lloyd(points, m, rng.substream(static_cast<std::uint64_t>(r)), options));
  }
  return pick_best(runs);
}

double silhouette(std::span<const Point2> points, std::span<const std::size_t> labels) {
  const auto sizes = cluster_sizes(points, labels);
  std::vector<double> scores(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel
  {
    std::vector<double> sums(sizes.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      scores[static_cast<std::size_t>(i)] =
          point_silhouette(points, labels, sizes, static_cast<std::size_t>(i), sums);
    }
  }
  return mean_of(scores);
}

double silhouette_serial(std::span<const Point2> points, std::span<const std::size_t> labels) {
  const auto sizes = cluster_sizes(points, labels);
  std::vector<double> scores(points.size());
  std::vector<double> sums(sizes.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    scores[i] = point_silhouette(points, labels, sizes, i, sums);
  }
  return mean_of(scores);
}

namespace detail {

std::size_t first_argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace detail

ModelSelection select_m(std::span<const Point2> points, std::size_t m_min, std::size_t m_max,
                        const RngStream& rng, const KMeansOptions& options) {
  if (m_min < 2 || m_max < m_min) throw ClusteringError("candidate range must satisfy 2 <= m_min <= m_max");
  std::vector<ClusterAssignment> fits;
  std::vector<double> scores;
  for (std::size_t m = m_min; m <= m_max; ++m) {
    fits.push_back(kmeans(points, m, rng.substream(m), options));
    scores.push_back(silhouette(points, fits.back().labels));
  }
  const auto best = detail::first_argmax(scores);
  return {m_min + best, std::move(fits[best]), std::move(scores)};
}

}  // namespace dsentry::stats
