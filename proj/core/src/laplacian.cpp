#include "specclust/laplacian.hpp"

#include "specclust/error.hpp"

#include <cmath>
#include <string>

namespace specclust {

namespace {

void require_positive(const DegreeVector& d, std::size_t n) {
  if (d.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "degree vector has " + std::to_string(d.size()) + " entries, expected " +
                    std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d[i] > 0.0)) {
      throw Error(ErrorCode::ZeroDegree,
                  "node " + std::to_string(i) + " has non-positive degree " +
                      std::to_string(d[i]));
    }
  }
}

} // namespace

DegreeVector degrees(const CsrMatrix& w) {
  if (w.n_rows != w.n_cols) {
    throw Error(ErrorCode::NotSquare, "degrees: matrix is " + std::to_string(w.n_rows) +
                                          "x" + std::to_string(w.n_cols));
  }
  const std::vector<double> ones(w.n_cols, 1.0);
  return {spmv(w, ones)};
}

IsolatedResult handle_isolated(const CsrMatrix& w, const DegreeVector& d,
                               IsolatedPolicy policy) {
  if (d.size() != w.n_rows) {
    throw Error(ErrorCode::DimensionMismatch, "degree vector does not match matrix");
  }
  IsolatedResult out;
  out.old_to_new.assign(w.n_rows, kRemovedNode);
  for (std::size_t i = 0; i < w.n_rows; ++i) {
    if (d[i] == 0.0) {
      out.removed.push_back(i);
    } else {
      out.old_to_new[i] = out.new_to_old.size();
      out.new_to_old.push_back(i);
    }
  }
  if (out.removed.empty()) {
    out.w = w;
    out.deg = d;
    return out;
  }
  if (policy == IsolatedPolicy::Error) {
    throw IsolatedNodeError(out.removed);
  }
  out.w = csr_submatrix(w, out.new_to_old);
  out.deg = degrees(out.w);
  return out;
}

CsrMatrix row_scale(const CsrMatrix& w, const DegreeVector& d) {
  require_positive(d, w.n_rows);
  CsrMatrix out = w;
  for (std::size_t i = 0; i < w.n_rows; ++i) {
    for (auto p = w.row_ptr[i]; p < w.row_ptr[i + 1]; ++p) {
      out.vals[p] = w.vals[p] / d[i];
    }
  }
  return out;
}

CsrMatrix sym_scale(const CsrMatrix& w, const DegreeVector& d) {
  if (w.n_rows != w.n_cols) {
    throw Error(ErrorCode::NotSquare, "sym_scale requires a square matrix");
  }
  require_positive(d, w.n_rows);
  CsrMatrix out = w;
  const auto n = static_cast<std::ptrdiff_t>(w.n_rows);
#pragma omp parallel for schedule(static) if (w.nnz() > 65536)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (auto p = w.row_ptr[i]; p < w.row_ptr[i + 1]; ++p) {
      // d_i * d_j commutes exactly, so (i, j) and (j, i) scale identically.
      out.vals[p] = w.vals[p] / std::sqrt(d[i] * d[w.col_idx[p]]);
    }
  }
  return out;
}

DenseMatrix recover_row_eigvecs(const DenseMatrix& u, const DegreeVector& d) {
  require_positive(d, u.rows);
  DenseMatrix v(u.rows, u.cols);
  for (std::size_t i = 0; i < u.rows; ++i) {
    const double s = 1.0 / std::sqrt(d[i]);
    for (std::size_t j = 0; j < u.cols; ++j) {
      v(i, j) = u(i, j) * s;
    }
  }
  for (std::size_t j = 0; j < v.cols; ++j) {
    double sq = 0.0;
    for (std::size_t i = 0; i < v.rows; ++i) {
      sq += v(i, j) * v(i, j);
    }
    const double norm = std::sqrt(sq);
    if (norm > 0.0) {
      for (std::size_t i = 0; i < v.rows; ++i) {
        v(i, j) /= norm;
      }
    }
  }
  return v;
}

} // namespace specclust
