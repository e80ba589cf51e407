#include "specclust/io.hpp"

#include "specclust/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

namespace specclust::io {

namespace {

// Whitespace-separated token reader that tracks line numbers for messages.
class Tokenizer {
public:
  explicit Tokenizer(std::istream& is) : is_(is) {}

  bool next(std::string& tok) {
    tok.clear();
    int c;
    while ((c = is_.get()) != EOF && std::isspace(c)) {
      if (c == '\n') {
        ++line_;
      }
    }
    if (c == EOF) {
      return false;
    }
    tok.push_back(static_cast<char>(c));
    while ((c = is_.peek()) != EOF && !std::isspace(c)) {
      tok.push_back(static_cast<char>(is_.get()));
    }
    return true;
  }

  std::string expect(const char* what) {
    std::string tok;
    if (!next(tok)) {
      fail(std::string("unexpected end of input, expected ") + what);
    }
    return tok;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line_) + ": " + msg);
  }

  std::size_t line() const { return line_; }

private:
  std::istream& is_;
  std::size_t line_ = 1;
};

template <typename Int>
Int parse_int(Tokenizer& tz, const char* what) {
  const auto tok = tz.expect(what);
  Int v{};
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    tz.fail(std::string("invalid ") + what + " '" + tok + "'");
  }
  return v;
}

double parse_real(Tokenizer& tz, const char* what) {
  const auto tok = tz.expect(what);
  double v = 0.0;
  const char* first = tok.data();
  const auto* end = tok.data() + tok.size();
  if (first != end && *first == '+') {
    ++first;
  }
  auto [ptr, ec] = std::from_chars(first, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    tz.fail(std::string("invalid ") + what + " '" + tok + "'");
  }
  return v;
}

void expect_eof(Tokenizer& tz) {
  std::string tok;
  if (tz.next(tok)) {
    tz.fail("trailing content '" + tok + "'");
  }
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) {
    throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  }
  return f;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) {
    throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  }
  return f;
}

void finish(std::ofstream& f, const std::filesystem::path& path) {
  f.flush();
  if (!f) {
    throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
  }
}

} // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) {
    throw Error(ErrorCode::Io, "cannot format value");
  }
  return {buf.data(), ptr};
}

void write_sparse(std::ostream& os, const CooMatrix& m) {
  const auto canon = coo_canonicalize(m, DuplicatePolicy::Error);
  os << canon.n_rows << ' ' << canon.n_cols << ' ' << canon.nnz() << '\n';
  for (std::size_t e = 0; e < canon.nnz(); ++e) {
    os << canon.rows[e] << ' ' << canon.cols[e] << ' ' << format_double(canon.vals[e])
       << '\n';
  }
}

void write_sparse(std::ostream& os, const CsrMatrix& m) {
  write_sparse(os, csr_to_coo(m));
}

CooMatrix read_sparse(std::istream& is) {
  Tokenizer tz(is);
  const auto n_rows = parse_int<std::size_t>(tz, "row count");
  const auto n_cols = parse_int<std::size_t>(tz, "column count");
  const auto nnz = parse_int<std::size_t>(tz, "nnz");
  CooMatrix m(n_rows, n_cols);
  m.reserve(nnz);
  for (std::size_t e = 0; e < nnz; ++e) {
    const auto r = parse_int<index_t>(tz, "row index");
    const auto c = parse_int<index_t>(tz, "column index");
    const auto v = parse_real(tz, "value");
    if (r >= n_rows || c >= n_cols) {
      tz.fail("entry (" + std::to_string(r) + ", " + std::to_string(c) +
              ") outside " + std::to_string(n_rows) + "x" + std::to_string(n_cols));
    }
    m.push(r, c, v);
  }
  expect_eof(tz);
  return coo_canonicalize(std::move(m), DuplicatePolicy::Sum);
}

void write_dense(std::ostream& os, const DenseMatrix& m) {
  os << m.rows << ' ' << m.cols << '\n';
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j > 0) {
        os << ' ';
      }
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

DenseMatrix read_dense(std::istream& is) {
  Tokenizer tz(is);
  const auto rows = parse_int<std::size_t>(tz, "row count");
  const auto cols = parse_int<std::size_t>(tz, "column count");
  DenseMatrix m(rows, cols);
  for (auto& v : m.data) {
    v = parse_real(tz, "value");
  }
  expect_eof(tz);
  return m;
}

void write_labels(std::ostream& os, std::span<const std::int64_t> labels) {
  for (auto l : labels) {
    os << l << '\n';
  }
}

std::vector<std::int64_t> read_labels(std::istream& is) {
  Tokenizer tz(is);
  std::vector<std::int64_t> out;
  std::string tok;
  while (tz.next(tok)) {
    std::int64_t v = 0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
      tz.fail("invalid label '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

void write_edges(std::ostream& os, const EdgeList& edges) {
  for (const auto& [i, j] : edges.pairs) {
    os << i << ' ' << j << '\n';
  }
}

EdgeList read_edges(std::istream& is) {
  Tokenizer tz(is);
  EdgeList out;
  std::string tok;
  while (tz.next(tok)) {
    index_t i = 0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, i);
    if (ec != std::errc{} || ptr != end) {
      tz.fail("invalid node index '" + tok + "'");
    }
    const auto j = parse_int<index_t>(tz, "node index");
    out.pairs.emplace_back(i, j);
  }
  return out;
}

void save_sparse(const std::filesystem::path& path, const CooMatrix& m) {
  auto f = open_out(path);
  write_sparse(f, m);
  finish(f, path);
}

CooMatrix load_sparse(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_sparse(f);
}

void save_dense(const std::filesystem::path& path, const DenseMatrix& m) {
  auto f = open_out(path);
  write_dense(f, m);
  finish(f, path);
}

DenseMatrix load_dense(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_dense(f);
}

void save_labels(const std::filesystem::path& path, std::span<const std::int64_t> labels) {
  auto f = open_out(path);
  write_labels(f, labels);
  finish(f, path);
}

std::vector<std::int64_t> load_labels(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_labels(f);
}

void save_edges(const std::filesystem::path& path, const EdgeList& edges) {
  auto f = open_out(path);
  write_edges(f, edges);
  finish(f, path);
}

EdgeList load_edges(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_edges(f);
}

} // namespace specclust::io
