#pragma once

#include "specclust/dense.hpp"
#include "specclust/sparse.hpp"

#include <span>
#include <utility>
#include <vector>

namespace specclust {

/// Unordered node pairs (i, j) with i != j; builders emit i < j in
/// lexicographic order.
struct EdgeList {
  std::vector<std::pair<index_t, index_t>> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
  bool operator==(const EdgeList&) const = default;
};

/// Throws InvalidArgument on self-loops, indices >= n or a repeated
/// unordered pair.
void validate(const EdgeList& edges, std::size_t n);

enum class MeasureKind { Cosine, CrossCorrelation, ExpDecay };

struct SimilarityMeasure {
  MeasureKind kind = MeasureKind::CrossCorrelation;
  double sigma = 1.0; // ExpDecay bandwidth

  static SimilarityMeasure cosine() { return {MeasureKind::Cosine, 1.0}; }
  static SimilarityMeasure cross_correlation() {
    return {MeasureKind::CrossCorrelation, 1.0};
  }
  static SimilarityMeasure exp_decay(double sigma) {
    return {MeasureKind::ExpDecay, sigma};
  }
};

enum class NegativePolicy { ClampZero, Abs, Keep };

/// cosine: <x,y> / (|x| |y|)
/// cross_correlation: cosine of the mean-centred vectors
/// exp_decay: exp(-|x - y|^2 / (2 sigma^2))
/// Symmetric in its arguments bit for bit. Throws DegenerateVectorError
/// (index 0 for x, 1 for y) on a zero vector (cosine) or a constant vector
/// (cross_correlation).
double similarity(std::span<const double> x, std::span<const double> y,
                  const SimilarityMeasure& m);

/// Pairs with Euclidean distance <= eps.
EdgeList build_edges_eps(const PointMatrix& x, double eps);

/// Union k-NN graph: (i, j) is kept when either endpoint ranks the other
/// among its `knn` most similar points. Ties at the cut-off go to the lower
/// point index.
EdgeList build_edges_knn(const PointMatrix& x, std::size_t knn,
                         const SimilarityMeasure& m);

/// Pairs with similarity strictly greater than `lambda`.
EdgeList build_edges_threshold(const PointMatrix& x, double lambda,
                               const SimilarityMeasure& m);

/// Symmetric n x n similarity matrix W over the given edges, in canonical
/// COO order with no diagonal entries and nnz == 2 * edges.size().
CooMatrix build_similarity(const PointMatrix& x, const EdgeList& edges,
                           const SimilarityMeasure& m,
                           NegativePolicy negative = NegativePolicy::ClampZero);

} // namespace specclust
