#include "specclust/sbm.hpp"

#include "specclust/error.hpp"
#include "specclust/rng.hpp"

#include <cmath>
#include <utility>

namespace specclust {

namespace {

using Edge = std::pair<index_t, index_t>;

// Visits the indices in [0, total) of successful Bernoulli(p) trials.
template <typename Visit>
void bernoulli_successes(std::uint64_t total, double p, Rng& rng, Visit&& visit) {
  if (p <= 0.0 || total == 0) {
    return;
  }
  if (p >= 1.0) {
    for (std::uint64_t t = 0; t < total; ++t) {
      visit(t);
    }
    return;
  }
  const double log_q = std::log1p(-p);
  std::uint64_t t = 0;
  while (true) {
    // Failures before the next success ~ Geometric(p).
    const double u = rng.uniform();
    const double skip = std::floor(std::log1p(-u) / log_q);
    if (skip >= static_cast<double>(total - t)) {
      return;
    }
    t += static_cast<std::uint64_t>(skip);
    visit(t);
    if (++t >= total) {
      return;
    }
  }
}

} // namespace

void validate(const SbmConfig& cfg) {
  if (cfg.block_sizes.empty()) {
    throw Error(ErrorCode::InvalidArgument, "SBM needs at least one block");
  }
  for (auto s : cfg.block_sizes) {
    if (s == 0) {
      throw Error(ErrorCode::InvalidArgument, "SBM block sizes must be >= 1");
    }
  }
  if (!(cfg.p_out >= 0.0 && cfg.p_out <= cfg.p_in && cfg.p_in <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "SBM requires 0 <= p_out <= p_in <= 1");
  }
}

SbmGraph sbm_generate(const SbmConfig& cfg) {
  validate(cfg);
  const std::size_t r = cfg.block_sizes.size();
  std::vector<index_t> offset(r + 1, 0);
  for (std::size_t b = 0; b < r; ++b) {
    offset[b + 1] = offset[b] + cfg.block_sizes[b];
  }
  const std::size_t n = offset[r];

  std::vector<std::pair<std::size_t, std::size_t>> block_pairs;
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a; b < r; ++b) {
      block_pairs.emplace_back(a, b);
    }
  }
  std::vector<std::vector<Edge>> found(block_pairs.size());
  const auto np = static_cast<std::ptrdiff_t>(block_pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < np; ++t) {
    const auto [a, b] = block_pairs[t];
    Rng rng(cfg.seed, a, b);
    auto& out = found[t];
    const std::uint64_t sa = cfg.block_sizes[a];
    if (a == b) {
      // Pair index t enumerates (i, j), i < j, row by row.
      std::uint64_t row = 0;
      std::uint64_t row_start = 0;
      bernoulli_successes(sa * (sa - 1) / 2, cfg.p_in, rng, [&](std::uint64_t idx) {
        while (idx >= row_start + (sa - 1 - row)) {
          row_start += sa - 1 - row;
          ++row;
        }
        const std::uint64_t col = row + 1 + (idx - row_start);
        out.emplace_back(offset[a] + row, offset[a] + col);
      });
    } else {
      const std::uint64_t sb = cfg.block_sizes[b];
      bernoulli_successes(sa * sb, cfg.p_out, rng, [&](std::uint64_t idx) {
        out.emplace_back(offset[a] + idx / sb, offset[b] + idx % sb);
      });
    }
  }

  SbmGraph g;
  g.labels.resize(n);
  for (std::size_t b = 0; b < r; ++b) {
    for (auto i = offset[b]; i < offset[b + 1]; ++i) {
      g.labels[i] = b;
    }
  }
  std::size_t total = 0;
  for (const auto& f : found) {
    total += f.size();
  }
  CooMatrix w(n, n);
  w.reserve(2 * total);
  for (const auto& f : found) {
    for (const auto& [i, j] : f) {
      w.push(i, j, 1.0);
      w.push(j, i, 1.0);
    }
  }
  g.adjacency = coo_canonicalize(std::move(w), DuplicatePolicy::Error);
  return g;
}

} // namespace specclust
