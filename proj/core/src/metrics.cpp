#include "specclust/metrics.hpp"

#include "specclust/error.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

namespace specclust {

namespace {

void check(const CsrMatrix& w, const Partition& p) {
  if (w.n_rows != w.n_cols) {
    throw Error(ErrorCode::NotSquare, "graph metrics need a square matrix");
  }
  if (p.labels.size() != w.n_rows) {
    throw Error(ErrorCode::DimensionMismatch,
                "partition has " + std::to_string(p.labels.size()) + " labels for " +
                    std::to_string(w.n_rows) + " nodes");
  }
  for (auto l : p.labels) {
    if (l >= p.k) {
      throw Error(ErrorCode::InvalidArgument,
                  "label " + std::to_string(l) + " outside [0, " + std::to_string(p.k) + ")");
    }
  }
}

// W(A_i, ~A_i) for every part.
std::vector<double> boundary_weights(const CsrMatrix& w, const Partition& p) {
  std::vector<double> out(p.k, 0.0);
  for (std::size_t i = 0; i < w.n_rows; ++i) {
    for (auto q = w.row_ptr[i]; q < w.row_ptr[i + 1]; ++q) {
      if (p.labels[w.col_idx[q]] != p.labels[i]) {
        out[p.labels[i]] += w.vals[q];
      }
    }
  }
  return out;
}

std::uint64_t pairs(std::uint64_t c) { return c < 2 ? 0 : c * (c - 1) / 2; }

} // namespace

Partition Partition::from_labels(std::vector<std::size_t> labels) {
  Partition p;
  p.k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  p.labels = std::move(labels);
  return p;
}

double cut(const CsrMatrix& w, const Partition& p) {
  check(w, p);
  double total = 0.0;
  for (double b : boundary_weights(w, p)) {
    total += b;
  }
  return 0.5 * total;
}

double ratio_cut(const CsrMatrix& w, const Partition& p) {
  check(w, p);
  std::vector<std::size_t> size(p.k, 0);
  for (auto l : p.labels) {
    ++size[l];
  }
  const auto bnd = boundary_weights(w, p);
  double total = 0.0;
  for (std::size_t a = 0; a < p.k; ++a) {
    if (size[a] == 0) {
      throw Error(ErrorCode::EmptyPart, "part " + std::to_string(a) + " is empty");
    }
    total += bnd[a] / static_cast<double>(size[a]);
  }
  return 0.5 * total;
}

double ncut(const CsrMatrix& w, const Partition& p) {
  check(w, p);
  std::vector<double> vol(p.k, 0.0);
  for (std::size_t i = 0; i < w.n_rows; ++i) {
    for (auto q = w.row_ptr[i]; q < w.row_ptr[i + 1]; ++q) {
      vol[p.labels[i]] += w.vals[q];
    }
  }
  const auto bnd = boundary_weights(w, p);
  double total = 0.0;
  for (std::size_t a = 0; a < p.k; ++a) {
    if (!(vol[a] > 0.0)) {
      throw Error(ErrorCode::ZeroVolumePart,
                  "part " + std::to_string(a) + " has non-positive volume");
    }
    total += bnd[a] / vol[a];
  }
  return 0.5 * total;
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "ARI: labelings have different lengths");
  }
  const std::uint64_t n = a.size();
  if (n < 2) {
    return 1.0;
  }
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> joint;
  std::unordered_map<std::size_t, std::uint64_t> ca;
  std::unordered_map<std::size_t, std::uint64_t> cb;
  for (std::size_t i = 0; i < n; ++i) {
    ++joint[{a[i], b[i]}];
    ++ca[a[i]];
    ++cb[b[i]];
  }
  std::uint64_t index = 0;
  for (const auto& [key, c] : joint) {
    index += pairs(c);
  }
  std::uint64_t sa = 0;
  for (const auto& [key, c] : ca) {
    sa += pairs(c);
  }
  std::uint64_t sb = 0;
  for (const auto& [key, c] : cb) {
    sb += pairs(c);
  }
  const double expected =
      static_cast<double>(sa) * static_cast<double>(sb) / static_cast<double>(pairs(n));
  const double max_index = 0.5 * static_cast<double>(sa + sb);
  const double denom = max_index - expected;
  if (denom == 0.0) {
    return 1.0;
  }
  return (static_cast<double>(index) - expected) / denom;
}

} // namespace specclust
