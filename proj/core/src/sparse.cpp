#include "specclust/sparse.hpp"

#include "specclust/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace specclust {

void validate(const CooMatrix& m) {
  if (m.rows.size() != m.vals.size() || m.cols.size() != m.vals.size()) {
    throw Error(ErrorCode::InvalidArgument, "COO arrays have different lengths");
  }
  for (std::size_t e = 0; e < m.nnz(); ++e) {
    if (m.rows[e] >= m.n_rows || m.cols[e] >= m.n_cols) {
      throw Error(ErrorCode::InvalidArgument,
                  "COO entry " + std::to_string(e) + " out of range");
    }
    if (!std::isfinite(m.vals[e])) {
      throw Error(ErrorCode::InvalidArgument,
                  "COO entry " + std::to_string(e) + " is not finite");
    }
  }
}

void validate(const CsrMatrix& m) {
  if (m.row_ptr.size() != m.n_rows + 1 || m.row_ptr.front() != 0 ||
      m.row_ptr.back() != m.nnz() || m.col_idx.size() != m.nnz()) {
    throw Error(ErrorCode::InvalidArgument, "malformed CSR row pointer");
  }
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    if (m.row_ptr[i] > m.row_ptr[i + 1]) {
      throw Error(ErrorCode::InvalidArgument, "CSR row pointer decreases");
    }
    for (auto p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
      if (m.col_idx[p] >= m.n_cols) {
        throw Error(ErrorCode::InvalidArgument, "CSR column index out of range");
      }
      if (p > m.row_ptr[i] && m.col_idx[p] <= m.col_idx[p - 1]) {
        throw Error(ErrorCode::InvalidArgument,
                    "CSR columns not strictly increasing in row " + std::to_string(i));
      }
      if (!std::isfinite(m.vals[p])) {
        throw Error(ErrorCode::InvalidArgument, "CSR value is not finite");
      }
    }
  }
}

bool is_canonical(const CooMatrix& m) noexcept {
  for (std::size_t e = 1; e < m.nnz(); ++e) {
    if (m.rows[e - 1] > m.rows[e] ||
        (m.rows[e - 1] == m.rows[e] && m.cols[e - 1] >= m.cols[e])) {
      return false;
    }
  }
  return true;
}

CooMatrix coo_canonicalize(CooMatrix m, DuplicatePolicy policy) {
  validate(m);
  if (is_canonical(m)) {
    return m;
  }

  std::vector<std::size_t> order(m.nnz());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable so that duplicates are summed in input order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return m.rows[a] != m.rows[b] ? m.rows[a] < m.rows[b] : m.cols[a] < m.cols[b];
  });

  CooMatrix out(m.n_rows, m.n_cols);
  out.reserve(m.nnz());
  for (auto e : order) {
    if (out.nnz() > 0 && out.rows.back() == m.rows[e] && out.cols.back() == m.cols[e]) {
      if (policy == DuplicatePolicy::Error) {
        throw Error(ErrorCode::DuplicateEntry,
                    "duplicate entry at (" + std::to_string(m.rows[e]) + ", " +
                        std::to_string(m.cols[e]) + ")");
      }
      out.vals.back() += m.vals[e];
    } else {
      out.push(m.rows[e], m.cols[e], m.vals[e]);
    }
  }
  return out;
}

CsrMatrix coo_to_csr(const CooMatrix& m) {
  validate(m);
  if (!is_canonical(m)) {
    throw Error(ErrorCode::InvalidArgument, "coo_to_csr requires a canonical COO matrix");
  }
  CsrMatrix out;
  out.n_rows = m.n_rows;
  out.n_cols = m.n_cols;
  out.row_ptr.assign(m.n_rows + 1, 0);
  for (auto r : m.rows) {
    ++out.row_ptr[r + 1];
  }
  std::partial_sum(out.row_ptr.begin(), out.row_ptr.end(), out.row_ptr.begin());
  out.col_idx = m.cols;
  out.vals = m.vals;
  return out;
}

CooMatrix csr_to_coo(const CsrMatrix& m) {
  CooMatrix out(m.n_rows, m.n_cols);
  out.reserve(m.nnz());
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    for (auto p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
      out.push(i, m.col_idx[p], m.vals[p]);
    }
  }
  return out;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.n_cols || y.size() != a.n_rows) {
    throw Error(ErrorCode::DimensionMismatch,
                "spmv: matrix is " + std::to_string(a.n_rows) + "x" +
                    std::to_string(a.n_cols) + ", x has " + std::to_string(x.size()) +
                    ", y has " + std::to_string(y.size()));
  }
  const auto n = static_cast<std::ptrdiff_t>(a.n_rows);
#pragma omp parallel for schedule(static) if (a.nnz() > 32768)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (auto p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      acc += a.vals[p] * x[a.col_idx[p]];
    }
    y[i] = acc;
  }
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.n_rows);
  spmv(a, x, y);
  return y;
}

CsrMatrix csr_submatrix(const CsrMatrix& a, std::span<const index_t> keep) {
  constexpr auto kDropped = static_cast<index_t>(-1);
  std::vector<index_t> remap(a.n_cols, kDropped);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= a.n_rows || keep[i] >= a.n_cols ||
        (i > 0 && keep[i] <= keep[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "submatrix indices must be increasing and in range");
    }
    remap[keep[i]] = i;
  }
  CsrMatrix out;
  out.n_rows = keep.size();
  out.n_cols = keep.size();
  out.row_ptr.assign(1, 0);
  for (auto old_row : keep) {
    for (auto p = a.row_ptr[old_row]; p < a.row_ptr[old_row + 1]; ++p) {
      if (remap[a.col_idx[p]] != kDropped) {
        out.col_idx.push_back(remap[a.col_idx[p]]);
        out.vals.push_back(a.vals[p]);
      }
    }
    out.row_ptr.push_back(out.col_idx.size());
  }
  return out;
}

bool is_structurally_symmetric(const CsrMatrix& a) {
  if (a.n_rows != a.n_cols) {
    return false;
  }
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    for (auto p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const auto j = a.col_idx[p];
      const auto first = a.col_idx.begin() + static_cast<std::ptrdiff_t>(a.row_ptr[j]);
      const auto last = a.col_idx.begin() + static_cast<std::ptrdiff_t>(a.row_ptr[j + 1]);
      const auto it = std::lower_bound(first, last, i);
      if (it == last || *it != i ||
          a.vals[static_cast<std::size_t>(it - a.col_idx.begin())] != a.vals[p]) {
        return false;
      }
    }
  }
  return true;
}

} // namespace specclust
