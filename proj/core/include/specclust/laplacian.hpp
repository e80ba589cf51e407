#pragma once

#include "specclust/dense.hpp"
#include "specclust/sparse.hpp"

#include <limits>
#include <vector>

namespace specclust {

/// Diagonal of D: row sums of W.
struct DegreeVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Row sums computed as W * 1. Throws NotSquare.
DegreeVector degrees(const CsrMatrix& w);

enum class IsolatedPolicy { Error, Remove };

inline constexpr index_t kRemovedNode = std::numeric_limits<index_t>::max();

struct IsolatedResult {
  CsrMatrix w;
  DegreeVector deg;
  /// old index -> new index, kRemovedNode for dropped nodes.
  std::vector<index_t> old_to_new;
  /// new index -> old index.
  std::vector<index_t> new_to_old;
  std::vector<index_t> removed;
};

/// Nodes with zero degree are isolated. Error policy throws IsolatedNodeError
/// listing them; Remove returns the induced subgraph on the remaining nodes
/// with recomputed degrees.
IsolatedResult handle_isolated(const CsrMatrix& w, const DegreeVector& d,
                               IsolatedPolicy policy = IsolatedPolicy::Error);

/// D^-1 W (row-stochastic). Throws ZeroDegree on any degree <= 0.
CsrMatrix row_scale(const CsrMatrix& w, const DegreeVector& d);

/// D^-1/2 W D^-1/2, exactly symmetric when W is. Throws ZeroDegree.
CsrMatrix sym_scale(const CsrMatrix& w, const DegreeVector& d);

/// Maps eigenvectors u of D^-1/2 W D^-1/2 to eigenvectors v = D^-1/2 u of
/// D^-1 W (same eigenvalues), each column rescaled to unit 2-norm.
DenseMatrix recover_row_eigvecs(const DenseMatrix& u, const DegreeVector& d);

} // namespace specclust
