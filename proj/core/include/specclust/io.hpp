#pragma once

#include "specclust/dense.hpp"
#include "specclust/graph.hpp"
#include "specclust/sparse.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace specclust::io {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Sparse matrix text format:
///   n_rows n_cols nnz
///   row col value      (nnz lines, 0-based)
/// The writer emits canonical (row, col) order; the reader accepts any order
/// and sums duplicate positions.
void write_sparse(std::ostream& os, const CooMatrix& m);
void write_sparse(std::ostream& os, const CsrMatrix& m);
CooMatrix read_sparse(std::istream& is);

/// Dense matrix text format (points, eigenvectors):
///   n d
///   n lines of d values
void write_dense(std::ostream& os, const DenseMatrix& m);
DenseMatrix read_dense(std::istream& is);

/// One integer per line. Negative values mark unlabelled nodes.
void write_labels(std::ostream& os, std::span<const std::int64_t> labels);
std::vector<std::int64_t> read_labels(std::istream& is);

/// One `i j` pair per line, 0-based.
void write_edges(std::ostream& os, const EdgeList& edges);
EdgeList read_edges(std::istream& is);

// File-path convenience wrappers; failures raise ErrorCode::Io.
void save_sparse(const std::filesystem::path& path, const CooMatrix& m);
CooMatrix load_sparse(const std::filesystem::path& path);
void save_dense(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix load_dense(const std::filesystem::path& path);
void save_labels(const std::filesystem::path& path, std::span<const std::int64_t> labels);
std::vector<std::int64_t> load_labels(const std::filesystem::path& path);
void save_edges(const std::filesystem::path& path, const EdgeList& edges);
EdgeList load_edges(const std::filesystem::path& path);

} // namespace specclust::io
