#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace specclust {

using index_t = std::size_t;

/// Coordinate-format sparse matrix: parallel (row, col, val) arrays.
struct CooMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<index_t> rows;
  std::vector<index_t> cols;
  std::vector<double> vals;

  CooMatrix() = default;
  CooMatrix(std::size_t r, std::size_t c) : n_rows(r), n_cols(c) {}

  std::size_t nnz() const noexcept { return vals.size(); }

  void push(index_t r, index_t c, double v) {
    rows.push_back(r);
    cols.push_back(c);
    vals.push_back(v);
  }

  void reserve(std::size_t n) {
    rows.reserve(n);
    cols.reserve(n);
    vals.reserve(n);
  }

  bool operator==(const CooMatrix&) const = default;
};

/// Compressed-sparse-row matrix. Column indices are strictly increasing
/// within each row.
struct CsrMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<index_t> row_ptr{0};
  std::vector<index_t> col_idx;
  std::vector<double> vals;

  std::size_t nnz() const noexcept { return vals.size(); }

  bool operator==(const CsrMatrix&) const = default;
};

enum class DuplicatePolicy { Sum, Error };

/// Throws InvalidArgument if array lengths differ, an index is out of range
/// or a value is not finite. Duplicates and ordering are not checked.
void validate(const CooMatrix& m);

/// Throws InvalidArgument unless every CSR structural invariant holds.
void validate(const CsrMatrix& m);

/// True when entries are sorted by (row, col) with no duplicate position.
bool is_canonical(const CooMatrix& m) noexcept;

/// Sorts entries by (row, col) and merges duplicate positions. Explicit
/// zeros are kept. Throws DuplicateEntry under DuplicatePolicy::Error.
CooMatrix coo_canonicalize(CooMatrix m, DuplicatePolicy policy = DuplicatePolicy::Sum);

/// Requires a canonical input (throws InvalidArgument otherwise).
CsrMatrix coo_to_csr(const CooMatrix& m);

CooMatrix csr_to_coo(const CsrMatrix& m);

/// y = A x. Each y[i] is accumulated by a single worker in column order, so
/// the result does not depend on the thread count.
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);

/// Principal submatrix on `keep` (indices in increasing order).
CsrMatrix csr_submatrix(const CsrMatrix& a, std::span<const index_t> keep);

/// Square matrix whose nonzero pattern and values equal their transpose.
bool is_structurally_symmetric(const CsrMatrix& a);

} // namespace specclust
