#pragma once

#include "specclust/dense.hpp"

#include <cstdint>
#include <vector>

namespace specclust {

enum class KmeansInit { KmeansPlusPlus, RandomPoints };

struct KmeansConfig {
  std::size_t k = 2;
  std::size_t max_iters = 300;
  std::uint64_t seed = 0;
  KmeansInit init = KmeansInit::KmeansPlusPlus;
  std::size_t tol_changes = 0; ///< stop once label changes <= this
  /// Independent seedings; the run with the lowest SSE wins (earliest on ties).
  /// Restart 0 uses `seed` itself, later ones derived substreams.
  std::size_t restarts = 10;
  /// k-means++ candidates per step; 0 selects default_local_trials(k), 1 is
  /// plain D^2 sampling.
  std::size_t local_trials = 0;
};

struct Labeling {
  std::vector<std::size_t> labels;
  DenseMatrix centroids; ///< k x d, mean of each cluster's members
  double sse = 0.0;
  std::size_t iters_run = 0;
  /// SSE after the initial assignment and after every iteration.
  std::vector<double> sse_history;
  /// Number of times an empty cluster was re-seeded.
  std::size_t reseeds = 0;
};

/// S[i][j] = |v_i - c_j|^2 via |v_i|^2 + |c_j|^2 - 2 <v_i, c_j>, clamped
/// at zero. Identical rows give exactly 0. Throws DimensionMismatch.
DenseMatrix pairwise_sq_dist(const DenseMatrix& v, const DenseMatrix& c);

/// k-means++ seeding: returns the chosen row indices, all distinct. The
/// first is uniform; each next one is drawn with probability proportional to
/// the squared distance to the nearest chosen centroid (uniform over unchosen
/// rows once every such distance is zero). With local_trials > 1, that many
/// candidates are drawn per step and the one leaving the smallest total
/// squared distance is kept.
std::vector<std::size_t> kmeanspp_indices(const DenseMatrix& v, std::size_t k,
                                          std::uint64_t seed, std::size_t local_trials = 1);
DenseMatrix kmeanspp_init(const DenseMatrix& v, std::size_t k, std::uint64_t seed,
                          std::size_t local_trials = 1);

/// 2 + floor(ln k).
std::size_t default_local_trials(std::size_t k);

/// k distinct rows drawn uniformly.
std::vector<std::size_t> random_point_indices(std::size_t n, std::size_t k,
                                              std::uint64_t seed);

/// Lloyd iterations from the given centroids. Ties in the assignment go to
/// the lowest centroid index. An empty cluster takes over the point farthest
/// from its centroid (taken from a cluster with at least two members).
Labeling lloyd(const DenseMatrix& v, const DenseMatrix& init_centroids,
               const KmeansConfig& cfg);

/// Seeding (per cfg.init) followed by lloyd, repeated cfg.restarts times.
Labeling kmeans(const DenseMatrix& v, const KmeansConfig& cfg);

/// Sum of squared distances of each row to its assigned centroid, computed
/// directly from coordinate differences.
double sum_squared_error(const DenseMatrix& v, const std::vector<std::size_t>& labels,
                         const DenseMatrix& centroids);

/// Scales every row to unit 2-norm (zero rows are left as is).
DenseMatrix normalize_rows(DenseMatrix v);

} // namespace specclust
