#pragma once

/// \file clustering.hpp
/// Standardization embedding, k-means and silhouette model selection.
///
/// k-means restarts and the O(n^2) silhouette are OpenMP-parallel. Each
/// parallel kernel has a `_serial` counterpart that computes the identical
/// result in a single thread; the tests hold them bit-equal.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "dsentry/core.hpp"
#include "dsentry/rng.hpp"

namespace dsentry::stats {

using Point2 = std::array<double, 2>;

/// Per-modality centering and scaling of (duration, power).
struct EmbeddingModel {
  double duration_center = 0.0;
  double duration_scale = 1.0;
  double power_center = 0.0;
  double power_scale = 1.0;

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;
};

/// Centers at the sample means, scales by the (n - 1) sample deviations.
EmbeddingModel fit_embedding(const ShipmentSeries& series);
Point2 embed(const EmbeddingModel& model, const ShipmentObservation& obs);
std::vector<Point2> embed_all(const EmbeddingModel& model, const ShipmentSeries& series);

struct KMeansOptions {
  int restarts = 20;
  int max_iterations = 300;
  double tolerance = 1e-10;  // max centroid movement
};

struct ClusterAssignment {
  std::vector<std::size_t> labels;  // 0-based cluster index per point
  std::vector<Point2> centroids;
  double wcss = 0.0;                 // within-cluster sum of squares
  std::vector<double> objective_trace;  // WCSS after each Lloyd step, winning restart

  std::size_t cluster_count() const noexcept { return centroids.size(); }
};

double wcss(std::span<const Point2> points, std::span<const std::size_t> labels,
            std::span<const Point2> centroids);

/// k-means++ seeding and Lloyd iterations, best of `restarts` by WCSS (ties
/// keep the earliest restart). Restart r draws from rng.substream(r).
/// Throws ClusteringError when m == 0 or m exceeds the distinct point count.
ClusterAssignment kmeans(std::span<const Point2> points, std::size_t m, const RngStream& rng,
                         const KMeansOptions& options = {});
ClusterAssignment kmeans_serial(std::span<const Point2> points, std::size_t m,
                                const RngStream& rng, const KMeansOptions& options = {});

/// Mean silhouette, Euclidean distance; points in singleton clusters score 0.
/// Throws ClusteringError when fewer than two clusters are present.
double silhouette(std::span<const Point2> points, std::span<const std::size_t> labels);
double silhouette_serial(std::span<const Point2> points, std::span<const std::size_t> labels);

struct ModelSelection {
  std::size_t m = 0;
  ClusterAssignment assignment;
  std::vector<double> scores;  // silhouette per candidate, in candidate order
};

/// Tries m in [m_min, m_max] with kmeans(points, m, rng.substream(m)) and
/// keeps the highest mean silhouette; ties go to the smaller m.
ModelSelection select_m(std::span<const Point2> points, std::size_t m_min, std::size_t m_max,
                        const RngStream& rng, const KMeansOptions& options = {});

namespace detail {
/// Index of the first maximum.
std::size_t first_argmax(std::span<const double> scores);
}  // namespace detail

}  // namespace dsentry::stats
