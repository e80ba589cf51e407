#pragma once

#include "specclust/dense.hpp"

#include <vector>

namespace specclust {

struct SymmetricEigen {
  std::vector<double> values; // descending
  DenseMatrix vectors;        // column j pairs with values[j]
};

/// Full eigendecomposition of a small dense symmetric matrix: Householder
/// reduction to tridiagonal form followed by implicit QL with shifts.
/// Only the lower triangle of `a` is read. Throws NotConverged if QL fails
/// to deflate within 60 sweeps per eigenvalue.
SymmetricEigen symmetric_eigen(const DenseMatrix& a);

} // namespace specclust
