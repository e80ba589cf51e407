#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace specclust {

/// Dense row-major matrix. Used for data points (n x d), eigenvector
/// embeddings (n x k) and centroids (k x d).
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }

  bool operator==(const DenseMatrix&) const = default;
};

/// Data points X, one point per row.
using PointMatrix = DenseMatrix;

/// Throws InvalidArgument unless n >= 1, d >= 1 and every entry is finite.
void validate_points(const PointMatrix& x);

} // namespace specclust
