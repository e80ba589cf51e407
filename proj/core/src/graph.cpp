#include "specclust/graph.hpp"

#include "specclust/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

namespace specclust {

void validate_points(const PointMatrix& x) {
  if (x.rows == 0 || x.cols == 0) {
    throw Error(ErrorCode::InvalidArgument, "point matrix must have n >= 1 and d >= 1");
  }
  if (x.data.size() != x.rows * x.cols) {
    throw Error(ErrorCode::InvalidArgument, "point matrix storage size mismatch");
  }
  for (std::size_t e = 0; e < x.data.size(); ++e) {
    if (!std::isfinite(x.data[e])) {
      throw Error(ErrorCode::InvalidArgument,
                  "non-finite coordinate in point " + std::to_string(e / x.cols));
    }
  }
}

void validate(const EdgeList& edges, std::size_t n) {
  std::set<std::pair<index_t, index_t>> seen;
  for (const auto& [i, j] : edges.pairs) {
    if (i >= n || j >= n) {
      throw Error(ErrorCode::InvalidArgument,
                  "edge (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") references a node >= " + std::to_string(n));
    }
    if (i == j) {
      throw Error(ErrorCode::InvalidArgument, "self-loop at node " + std::to_string(i));
    }
    if (!seen.emplace(std::min(i, j), std::max(i, j)).second) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    acc += a[l] * b[l];
  }
  return acc;
}

// Per-point preprocessing shared by the single-pair and batch paths so both
// produce identical bits: centring (cross-correlation) and the 2-norm.
struct PreparedPoints {
  std::size_t d = 0;
  std::vector<double> rows;
  std::vector<double> norms;
  std::vector<char> degenerate;

  std::span<const double> row(std::size_t i) const { return {rows.data() + i * d, d}; }
};

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

void prepare_one(std::span<const double> in, std::span<double> out, double& norm,
                 char& degenerate, MeasureKind kind) {
  std::copy(in.begin(), in.end(), out.begin());
  if (kind == MeasureKind::CrossCorrelation) {
    const double mean =
        std::accumulate(in.begin(), in.end(), 0.0) / static_cast<double>(in.size());
    for (auto& v : out) {
      v -= mean;
    }
  }
  norm = std::sqrt(dot(out, out));
  if (kind == MeasureKind::Cosine) {
    degenerate = norm == 0.0;
  } else if (kind == MeasureKind::CrossCorrelation) {
    // Centring a constant vector can leave round-off residue.
    const double scale = std::sqrt(dot(in, in));
    degenerate = is_constant(in) || norm <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
  } else {
    degenerate = 0;
  }
}

PreparedPoints prepare(const PointMatrix& x, MeasureKind kind) {
  PreparedPoints p;
  p.d = x.cols;
  p.rows.resize(x.rows * x.cols);
  p.norms.resize(x.rows);
  p.degenerate.resize(x.rows);
  const auto n = static_cast<std::ptrdiff_t>(x.rows);
#pragma omp parallel for schedule(static) if (x.rows * x.cols > 65536)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    prepare_one(x.row(static_cast<std::size_t>(i)),
                {p.rows.data() + static_cast<std::size_t>(i) * p.d, p.d}, p.norms[i],
                p.degenerate[i], kind);
  }
  return p;
}

double prepared_similarity(const PreparedPoints& p, std::size_t i, std::size_t j,
                           const SimilarityMeasure& m) {
  const auto a = p.row(i);
  const auto b = p.row(j);
  if (m.kind == MeasureKind::ExpDecay) {
    double sq = 0.0;
    for (std::size_t l = 0; l < p.d; ++l) {
      const double diff = a[l] - b[l];
      sq += diff * diff;
    }
    return std::exp(-sq / (2.0 * m.sigma * m.sigma));
  }
  const double s = dot(a, b) / (p.norms[i] * p.norms[j]);
  return std::clamp(s, -1.0, 1.0);
}

void check_measure(const SimilarityMeasure& m) {
  if (m.kind == MeasureKind::ExpDecay && !(m.sigma > 0.0 && std::isfinite(m.sigma))) {
    throw Error(ErrorCode::InvalidArgument, "exp_decay requires sigma > 0");
  }
}

void check_degenerate(const PreparedPoints& p, std::size_t i) {
  if (p.degenerate[i]) {
    throw DegenerateVectorError(
        i, "point " + std::to_string(i) + " is degenerate for the similarity measure");
  }
}

void check_all_degenerate(const PreparedPoints& p) {
  for (std::size_t i = 0; i < p.norms.size(); ++i) {
    check_degenerate(p, i);
  }
}

double sq_distance(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double diff = a[l] - b[l];
    sq += diff * diff;
  }
  return sq;
}

// Collects per-row candidate lists computed in parallel, in row order.
template <typename RowFn>
EdgeList collect_rows(std::size_t n, RowFn&& row_fn) {
  std::vector<std::vector<index_t>> per_row(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    row_fn(static_cast<std::size_t>(i), per_row[i]);
  }
  EdgeList out;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : per_row[i]) {
      out.pairs.emplace_back(i, j);
    }
  }
  return out;
}

} // namespace

double similarity(std::span<const double> x, std::span<const double> y,
                  const SimilarityMeasure& m) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "similarity: vectors must have equal length >= 1");
  }
  check_measure(m);
  PointMatrix pair(2, x.size());
  std::copy(x.begin(), x.end(), pair.row(0).begin());
  std::copy(y.begin(), y.end(), pair.row(1).begin());
  const auto p = prepare(pair, m.kind);
  check_degenerate(p, 0);
  check_degenerate(p, 1);
  return prepared_similarity(p, 0, 1, m);
}

EdgeList build_edges_eps(const PointMatrix& x, double eps) {
  validate_points(x);
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  }
  return collect_rows(x.rows, [&](std::size_t i, std::vector<index_t>& out) {
    for (std::size_t j = i + 1; j < x.rows; ++j) {
      if (std::sqrt(sq_distance(x.row(i), x.row(j))) <= eps) {
        out.push_back(j);
      }
    }
  });
}

EdgeList build_edges_knn(const PointMatrix& x, std::size_t knn,
                         const SimilarityMeasure& m) {
  validate_points(x);
  check_measure(m);
  const std::size_t n = x.rows;
  if (knn < 1 || knn >= n) {
    throw Error(ErrorCode::InvalidArgument, "knn must satisfy 1 <= knn < n");
  }
  const auto p = prepare(x, m.kind);
  check_all_degenerate(p);

  // neighbours[i] = the knn most similar points to i.
  std::vector<std::vector<index_t>> neighbours(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    std::vector<std::pair<double, index_t>> cand;
    cand.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        // similarity is symmetric, so (i, j) and (j, i) rank identically.
        cand.emplace_back(prepared_similarity(p, std::min(i, j), std::max(i, j), m), j);
      }
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(knn),
                      cand.end(), [](const auto& a, const auto& b) {
                        return a.first != b.first ? a.first > b.first : a.second < b.second;
                      });
    auto& nb = neighbours[i];
    for (std::size_t r = 0; r < knn; ++r) {
      nb.push_back(cand[r].second);
    }
    std::sort(nb.begin(), nb.end());
  }

  return collect_rows(n, [&](std::size_t i, std::vector<index_t>& out) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::binary_search(neighbours[i].begin(), neighbours[i].end(), j) ||
          std::binary_search(neighbours[j].begin(), neighbours[j].end(), i)) {
        out.push_back(j);
      }
    }
  });
}

EdgeList build_edges_threshold(const PointMatrix& x, double lambda,
                               const SimilarityMeasure& m) {
  validate_points(x);
  check_measure(m);
  const auto p = prepare(x, m.kind);
  check_all_degenerate(p);
  return collect_rows(x.rows, [&](std::size_t i, std::vector<index_t>& out) {
    for (std::size_t j = i + 1; j < x.rows; ++j) {
      if (prepared_similarity(p, i, j, m) > lambda) {
        out.push_back(j);
      }
    }
  });
}

CooMatrix build_similarity(const PointMatrix& x, const EdgeList& edges,
                           const SimilarityMeasure& m, NegativePolicy negative) {
  validate_points(x);
  check_measure(m);
  validate(edges, x.rows);
  const auto p = prepare(x, m.kind);

  const std::size_t ne = edges.size();
  std::vector<double> val(ne);
  for (const auto& [i, j] : edges.pairs) {
    check_degenerate(p, i);
    check_degenerate(p, j);
  }
  const auto sne = static_cast<std::ptrdiff_t>(ne);
#pragma omp parallel for schedule(static) if (ne > 4096)
  for (std::ptrdiff_t e = 0; e < sne; ++e) {
    const auto [a, b] = edges.pairs[e];
    double s = prepared_similarity(p, std::min(a, b), std::max(a, b), m);
    if (s < 0.0) {
      if (negative == NegativePolicy::ClampZero) {
        s = 0.0;
      } else if (negative == NegativePolicy::Abs) {
        s = -s;
      }
    }
    val[e] = s;
  }

  CooMatrix w(x.rows, x.rows);
  w.reserve(2 * ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto [a, b] = edges.pairs[e];
    w.push(a, b, val[e]);
    w.push(b, a, val[e]);
  }
  return coo_canonicalize(std::move(w), DuplicatePolicy::Error);
}

} // namespace specclust
