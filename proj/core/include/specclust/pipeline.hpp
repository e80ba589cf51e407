#pragma once

#include "specclust/dense.hpp"
#include "specclust/graph.hpp"
#include "specclust/kmeans.hpp"
#include "specclust/lanczos.hpp"
#include "specclust/laplacian.hpp"
#include "specclust/sparse.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace specclust {

enum class GraphPattern { Epsilon, Knn, Threshold, Given };

/// Data points plus the recipe for their similarity graph.
struct PointsInput {
  PointMatrix points;
  GraphPattern pattern = GraphPattern::Epsilon;
  double eps = 1.0;
  std::size_t knn = 10;
  double lambda = 0.0;
  SimilarityMeasure measure;
  EdgeList edges; ///< used when pattern == Given
};

struct PipelineConfig {
  /// Either a ready similarity matrix W or points to build it from.
  std::variant<CooMatrix, PointsInput> input;
  std::size_t k_clusters = 2;
  LanczosConfig eigen;  ///< k is overridden by k_clusters
  KmeansConfig kmeans;  ///< k is overridden by k_clusters
  IsolatedPolicy isolated_policy = IsolatedPolicy::Error;
  NegativePolicy negative_policy = NegativePolicy::ClampZero;
  bool normalize_rows = false;
};

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

struct ClusterReport {
  /// One label per input node; -1 for isolated nodes that were removed.
  std::vector<std::int64_t> labels;
  /// k-means result over the retained nodes.
  Labeling labeling;
  std::vector<double> eigenvalues;
  std::vector<double> eigen_residuals;
  std::size_t eigen_restarts = 0;
  std::size_t eigen_matvecs = 0;
  /// Ncut of the clustering on the (unnormalized) W it was computed from.
  double ncut_value = 0.0;
  std::vector<StageTiming> timings;
  std::vector<std::string> warnings;
  std::vector<index_t> removed_nodes;
};

/// Similarity matrix for point input.
CooMatrix build_graph(const PointsInput& input, NegativePolicy negative);

/// Degrees, isolated-node handling, symmetric normalization, top-k
/// eigenpairs and recovery of the D^-1 W eigenvectors.
struct SpectralEmbedding {
  IsolatedResult graph;
  std::vector<double> eigenvalues;
  std::vector<double> residuals; ///< of the symmetric operator
  std::size_t restarts = 0;
  std::size_t matvecs = 0;
  DenseMatrix vectors; ///< n' x k eigenvectors of D^-1 W, unit columns
  double laplacian_ms = 0.0;
  double eigen_ms = 0.0;
};

SpectralEmbedding spectral_embedding(const CsrMatrix& w, const LanczosConfig& cfg,
                                     IsolatedPolicy isolated);

/// Full pipeline: graph, normalization, eigenvectors, k-means, metrics.
/// Stage failures are rethrown as StageError tagged with the stage name.
ClusterReport run(const PipelineConfig& cfg);

} // namespace specclust
