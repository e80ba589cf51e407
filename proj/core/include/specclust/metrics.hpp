#pragma once

#include "specclust/sparse.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace specclust {

/// Assignment of n nodes to parts 0..k-1.
struct Partition {
  std::vector<std::size_t> labels;
  std::size_t k = 0;

  /// k = max label + 1.
  static Partition from_labels(std::vector<std::size_t> labels);
};

/// Total weight of edges whose endpoints lie in different parts, each
/// unordered edge counted once. Empty parts contribute nothing.
double cut(const CsrMatrix& w, const Partition& p);

/// (1/2) sum_i W(A_i, ~A_i) / |A_i|. Throws EmptyPart.
double ratio_cut(const CsrMatrix& w, const Partition& p);

/// (1/2) sum_i W(A_i, ~A_i) / vol(A_i), vol = sum of degrees (self-loops
/// included). Throws ZeroVolumePart.
double ncut(const CsrMatrix& w, const Partition& p);

/// Adjusted Rand Index of two labelings of the same nodes; label values are
/// arbitrary. Returns 1 when both labelings are trivially identical
/// (n < 2, or both all-one-part or both all-singletons).
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

} // namespace specclust
