#include "specclust/kmeans.hpp"

#include "specclust/error.hpp"
#include "specclust/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace specclust {

namespace {

void check_input(const DenseMatrix& v, std::size_t k) {
  if (v.rows == 0 || v.cols == 0 || v.data.size() != v.rows * v.cols) {
    throw Error(ErrorCode::InvalidArgument, "k-means input must be a non-empty matrix");
  }
  if (k < 1 || k > v.rows) {
    throw Error(ErrorCode::InvalidArgument,
                "k-means needs 1 <= k <= n (k=" + std::to_string(k) +
                    ", n=" + std::to_string(v.rows) + ")");
  }
  for (double x : v.data) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::InvalidArgument, "k-means input has a non-finite entry");
    }
  }
}

double sq_diff(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double d = a[l] - b[l];
    acc += d * d;
  }
  return acc;
}

double sq_norm(std::span<const double> a) {
  double acc = 0.0;
  for (double x : a) {
    acc += x * x;
  }
  return acc;
}

// Assigns each row to its nearest centroid; returns the distance matrix.
DenseMatrix assign(const DenseMatrix& v, const DenseMatrix& c,
                   std::vector<std::size_t>& labels) {
  auto s = pairwise_sq_dist(v, c);
  labels.resize(v.rows);
  const auto n = static_cast<std::ptrdiff_t>(v.rows);
#pragma omp parallel for schedule(static) if (v.rows * c.rows > 16384)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto row = s.row(static_cast<std::size_t>(i));
    labels[i] = static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
  }
  return s;
}

// Gives every empty cluster the point farthest from its current centroid.
std::size_t reseed_empty(const DenseMatrix& v, const DenseMatrix& dist,
                         std::vector<std::size_t>& labels, DenseMatrix& c) {
  const std::size_t k = c.rows;
  std::vector<std::size_t> counts(k, 0);
  for (auto l : labels) {
    ++counts[l];
  }
  std::size_t reseeds = 0;
  std::vector<char> moved(v.rows, 0);
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] != 0) {
      continue;
    }
    std::size_t best = v.rows;
    double best_d = -1.0;
    for (std::size_t i = 0; i < v.rows; ++i) {
      if (moved[i] || counts[labels[i]] < 2) {
        continue;
      }
      const double d = dist(i, labels[i]);
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    --counts[labels[best]];
    labels[best] = j;
    counts[j] = 1;
    moved[best] = 1;
    std::copy(v.row(best).begin(), v.row(best).end(), c.row(j).begin());
    ++reseeds;
  }
  return reseeds;
}

// Per-cluster means, accumulated serially in row order.
DenseMatrix cluster_means(const DenseMatrix& v, const std::vector<std::size_t>& labels,
                          const DenseMatrix& previous) {
  DenseMatrix c(previous.rows, v.cols);
  std::vector<std::size_t> counts(previous.rows, 0);
  for (std::size_t i = 0; i < v.rows; ++i) {
    auto dst = c.row(labels[i]);
    const auto src = v.row(i);
    for (std::size_t l = 0; l < v.cols; ++l) {
      dst[l] += src[l];
    }
    ++counts[labels[i]];
  }
  for (std::size_t j = 0; j < c.rows; ++j) {
    if (counts[j] == 0) {
      std::copy(previous.row(j).begin(), previous.row(j).end(), c.row(j).begin());
      continue;
    }
    const double inv = static_cast<double>(counts[j]);
    for (auto& x : c.row(j)) {
      x /= inv;
    }
  }
  return c;
}

} // namespace

DenseMatrix pairwise_sq_dist(const DenseMatrix& v, const DenseMatrix& c) {
  if (v.cols != c.cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "pairwise_sq_dist: points have d=" + std::to_string(v.cols) +
                    ", centroids have d=" + std::to_string(c.cols));
  }
  std::vector<double> vnorm(v.rows);
  std::vector<double> cnorm(c.rows);
  for (std::size_t i = 0; i < v.rows; ++i) {
    vnorm[i] = sq_norm(v.row(i));
  }
  for (std::size_t j = 0; j < c.rows; ++j) {
    cnorm[j] = sq_norm(c.row(j));
  }
  DenseMatrix s(v.rows, c.rows);
  const auto n = static_cast<std::ptrdiff_t>(v.rows);
#pragma omp parallel for schedule(static) if (v.rows * c.rows * v.cols > 65536)
  for (std::ptrdiff_t si = 0; si < n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    const auto vi = v.row(i);
    for (std::size_t j = 0; j < c.rows; ++j) {
      const auto cj = c.row(j);
      double ip = 0.0;
      for (std::size_t l = 0; l < v.cols; ++l) {
        ip += vi[l] * cj[l];
      }
      s(i, j) = std::max(0.0, (vnorm[i] + cnorm[j]) - 2.0 * ip);
    }
  }
  return s;
}

std::vector<std::size_t> kmeanspp_indices(const DenseMatrix& v, std::size_t k,
                                          std::uint64_t seed, std::size_t local_trials) {
  check_input(v, k);
  if (local_trials < 1) {
    throw Error(ErrorCode::InvalidArgument, "k-means++ needs local_trials >= 1");
  }
  const std::size_t n = v.rows;
  const auto sn = static_cast<std::ptrdiff_t>(n);
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  std::vector<char> taken(n, 0);

  // dist[i] = squared distance to the nearest chosen centroid.
  std::vector<double> dist(n);
  std::vector<double> trial(n), best_trial(n);
  auto distances_to = [&](std::size_t c, std::vector<double>& out) {
    const auto cr = v.row(c);
#pragma omp parallel for schedule(static) if (n * v.cols > 65536)
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
      const auto u = static_cast<std::size_t>(i);
      out[u] = std::min(dist[u], sq_diff(v.row(u), cr));
    }
  };
  auto take = [&](std::size_t c) {
    chosen.push_back(c);
    taken[c] = 1;
  };

  take(rng.uniform_index(n));
  std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
  distances_to(chosen.back(), dist);

  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) {
        total += dist[i];
      }
    }
    if (!(total > 0.0)) {
      // Every remaining point coincides with a chosen one.
      std::size_t r = rng.uniform_index(n - chosen.size());
      std::size_t pick = n;
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (!taken[i] && r-- == 0) {
          pick = i;
        }
      }
      take(pick);
      continue;
    }

    std::size_t best = n;
    double best_potential = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < local_trials; ++t) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      std::size_t pick = n;
      std::size_t last_positive = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || !(dist[i] > 0.0)) {
          continue;
        }
        last_positive = i;
        acc += dist[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        pick = last_positive; // round-off overran the cumulative sum
      }
      if (local_trials == 1) {
        best = pick;
        break;
      }
      distances_to(pick, trial);
      double potential = 0.0;
      for (double d : trial) {
        potential += d;
      }
      if (potential < best_potential) {
        best_potential = potential;
        best = pick;
        std::swap(trial, best_trial);
      }
    }
    take(best);
    if (local_trials == 1) {
      distances_to(best, dist);
    } else {
      std::swap(dist, best_trial);
    }
  }
  return chosen;
}

std::size_t default_local_trials(std::size_t k) {
  return 2 + static_cast<std::size_t>(std::log(static_cast<double>(std::max<std::size_t>(k, 1))));
}

DenseMatrix kmeanspp_init(const DenseMatrix& v, std::size_t k, std::uint64_t seed,
                          std::size_t local_trials) {
  const auto idx = kmeanspp_indices(v, k, seed, local_trials);
  DenseMatrix c(k, v.cols);
  for (std::size_t j = 0; j < k; ++j) {
    std::copy(v.row(idx[j]).begin(), v.row(idx[j]).end(), c.row(j).begin());
  }
  return c;
}

std::vector<std::size_t> random_point_indices(std::size_t n, std::size_t k,
                                              std::uint64_t seed) {
  if (k > n) {
    throw Error(ErrorCode::InvalidArgument, "cannot draw more points than available");
  }
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(perm[i], perm[i + rng.uniform_index(n - i)]);
  }
  perm.resize(k);
  return perm;
}

double sum_squared_error(const DenseMatrix& v, const std::vector<std::size_t>& labels,
                         const DenseMatrix& centroids) {
  double sse = 0.0;
  for (std::size_t i = 0; i < v.rows; ++i) {
    sse += sq_diff(v.row(i), centroids.row(labels[i]));
  }
  return sse;
}

Labeling lloyd(const DenseMatrix& v, const DenseMatrix& init_centroids,
               const KmeansConfig& cfg) {
  check_input(v, cfg.k);
  if (init_centroids.rows != cfg.k || init_centroids.cols != v.cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "initial centroids must be " + std::to_string(cfg.k) + "x" +
                    std::to_string(v.cols));
  }
  if (cfg.max_iters < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
  }

  Labeling out;
  DenseMatrix c = init_centroids;
  auto dist = assign(v, c, out.labels);
  out.reseeds += reseed_empty(v, dist, out.labels, c);
  out.sse_history.push_back(sum_squared_error(v, out.labels, c));

  std::vector<std::size_t> next;
  std::size_t changes = 0;
  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    c = cluster_means(v, out.labels, c);
    dist = assign(v, c, next);
    out.reseeds += reseed_empty(v, dist, next, c);
    changes = 0;
    for (std::size_t i = 0; i < v.rows; ++i) {
      changes += next[i] != out.labels[i];
    }
    out.labels.swap(next);
    out.iters_run = it;
    out.sse_history.push_back(sum_squared_error(v, out.labels, c));
    if (changes <= cfg.tol_changes) {
      break;
    }
  }
  // Report centroids that are the means of the final assignment.
  out.centroids = changes == 0 ? std::move(c) : cluster_means(v, out.labels, c);
  out.sse = sum_squared_error(v, out.labels, out.centroids);
  return out;
}

namespace {

std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart) {
  return restart == 0 ? seed : Rng(seed, 1, restart).next_u64();
}

} // namespace

Labeling kmeans(const DenseMatrix& v, const KmeansConfig& cfg) {
  check_input(v, cfg.k);
  if (cfg.restarts < 1) {
    throw Error(ErrorCode::InvalidArgument, "k-means needs restarts >= 1");
  }
  Labeling best;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t seed = restart_seed(cfg.seed, r);
    DenseMatrix init;
    if (cfg.init == KmeansInit::KmeansPlusPlus) {
      init = kmeanspp_init(v, cfg.k, seed,
                           cfg.local_trials == 0 ? default_local_trials(cfg.k) : cfg.local_trials);
    } else {
      const auto idx = random_point_indices(v.rows, cfg.k, seed);
      init = DenseMatrix(cfg.k, v.cols);
      for (std::size_t j = 0; j < cfg.k; ++j) {
        std::copy(v.row(idx[j]).begin(), v.row(idx[j]).end(), init.row(j).begin());
      }
    }
    auto run = lloyd(v, init, cfg);
    if (r == 0 || run.sse < best.sse) {
      best = std::move(run);
    }
  }
  return best;
}

DenseMatrix normalize_rows(DenseMatrix v) {
  for (std::size_t i = 0; i < v.rows; ++i) {
    auto r = v.row(i);
    const double nr = std::sqrt(sq_norm(r));
    if (nr > 0.0) {
      for (auto& x : r) {
        x /= nr;
      }
    }
  }
  return v;
}

} // namespace specclust
