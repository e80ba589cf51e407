#include <doctest.h>

#include "oracles.hpp"

#include <specclust/error.hpp>
#include <specclust/metrics.hpp>
#include <specclust/pipeline.hpp>
#include <specclust/sbm.hpp>

#include <cmath>

using namespace specclust;
using namespace specclust::testing;

namespace {

std::vector<std::size_t> to_size(const std::vector<std::int64_t>& l) {
  return {l.begin(), l.end()};
}

CooMatrix two_triangles() {
  CooMatrix m(6, 6);
  for (index_t base : {0u, 3u}) {
    for (index_t i = 0; i < 3; ++i) {
      for (index_t j = 0; j < 3; ++j) {
        if (i != j) {
          m.push(base + i, base + j, 1.0);
        }
      }
    }
  }
  return coo_canonicalize(m);
}

} // namespace

TEST_CASE("two disjoint triangles") {
  PipelineConfig cfg;
  cfg.input = two_triangles();
  cfg.k_clusters = 2;
  const auto r = run(cfg);
  const std::vector<std::size_t> truth{0, 0, 0, 1, 1, 1};
  CHECK(adjusted_rand_index(to_size(r.labels), truth) == 1.0);
  CHECK(r.ncut_value == 0.0);
  CHECK(std::abs(r.eigenvalues[0] - 1.0) <= 1e-8);
  CHECK(std::abs(r.eigenvalues[1] - 1.0) <= 1e-8);
  CHECK(r.timings.size() >= 4);
}

TEST_CASE("configuration errors are stage tagged") {
  PipelineConfig cfg;
  cfg.input = two_triangles();
  cfg.k_clusters = 7;
  try {
    run(cfg);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "config");
  }
  cfg.k_clusters = 1;
  CHECK_THROWS_AS(run(cfg), StageError);
}

TEST_CASE("isolated nodes") {
  auto m = two_triangles();
  CooMatrix bigger(7, 7);
  bigger.rows = m.rows;
  bigger.cols = m.cols;
  bigger.vals = m.vals;
  PipelineConfig cfg;
  cfg.input = bigger;
  cfg.k_clusters = 2;
  try {
    run(cfg);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "laplacian");
    CHECK(e.code() == ErrorCode::IsolatedNode);
  }
  cfg.isolated_policy = IsolatedPolicy::Remove;
  const auto r = run(cfg);
  CHECK(r.labels.size() == 7);
  CHECK(r.labels[6] == -1);
  CHECK(r.removed_nodes == std::vector<index_t>{6});
  CHECK(!r.warnings.empty());
  const std::vector<std::int64_t> head(r.labels.begin(), r.labels.begin() + 6);
  CHECK(adjusted_rand_index(to_size(head), std::vector<std::size_t>{0, 0, 0, 1, 1, 1}) == 1.0);
}

TEST_CASE("point input") {
  PointsInput in;
  in.points = PointMatrix(8, 2);
  for (std::size_t i = 0; i < 8; ++i) {
    in.points(i, 0) = (i < 4 ? 0.0 : 20.0) + 0.1 * static_cast<double>(i % 4);
    in.points(i, 1) = 0.3 * static_cast<double>(i % 2);
  }
  in.pattern = GraphPattern::Epsilon;
  in.eps = 1.0;
  in.measure = SimilarityMeasure::exp_decay(1.0);
  PipelineConfig cfg;
  cfg.input = in;
  cfg.k_clusters = 2;
  const auto r = run(cfg);
  CHECK(adjusted_rand_index(to_size(r.labels), std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1}) == 1.0);

  in.pattern = GraphPattern::Knn;
  in.knn = 2;
  cfg.input = in;
  CHECK(adjusted_rand_index(to_size(run(cfg).labels), std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1}) == 1.0);
}

TEST_CASE("block diagonal similarity graphs recover the blocks for any seed") {
  Rng rng(41);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t k = 2 + rng.uniform_index(5);
    CooMatrix w(0, 0);
    std::vector<std::size_t> truth;
    std::size_t offset = 0;
    std::vector<std::tuple<index_t, index_t, double>> entries;
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t size = 3 + rng.uniform_index(20);
      const auto part = random_connected_graph(size, 0.3, rng);
      for (std::size_t e = 0; e < part.nnz(); ++e) {
        entries.emplace_back(part.rows[e] + offset, part.cols[e] + offset, part.vals[e]);
      }
      truth.insert(truth.end(), size, b);
      offset += size;
    }
    w = CooMatrix(offset, offset);
    for (const auto& [i, j, v] : entries) {
      w.push(i, j, v);
    }
    PipelineConfig cfg;
    cfg.input = coo_canonicalize(w);
    cfg.k_clusters = k;
    cfg.eigen.seed = seed;
    cfg.kmeans.seed = seed;
    const auto r = run(cfg);
    CHECK(adjusted_rand_index(to_size(r.labels), truth) == 1.0);
    CHECK(r.ncut_value == 0.0);
  }
}

TEST_CASE("SBM 4 x 50 recovery") {
  std::size_t good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SbmConfig s;
    s.block_sizes = {50, 50, 50, 50};
    s.p_in = 0.3;
    s.p_out = 0.01;
    s.seed = seed;
    const auto g = sbm_generate(s);
    PipelineConfig cfg;
    cfg.input = g.adjacency;
    cfg.k_clusters = 4;
    cfg.isolated_policy = IsolatedPolicy::Remove;
    cfg.kmeans.seed = seed;
    const auto r = run(cfg);
    const double ari = adjusted_rand_index(to_size(r.labels), g.labels);
    good += ari >= 0.95 ? 1 : 0;
  }
  CHECK(good >= 9);
}

TEST_CASE("reported ncut equals an independent recomputation") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const auto coo = random_connected_graph(30 + rng.uniform_index(40), 0.1, rng);
    PipelineConfig cfg;
    cfg.input = coo;
    cfg.k_clusters = 2 + rng.uniform_index(3);
    const auto r = run(cfg);
    const auto dense = to_dense(coo);
    const auto labels = to_size(r.labels);
    double total = 0.0;
    for (std::size_t a = 0; a < cfg.k_clusters; ++a) {
      double boundary = 0, vol = 0;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != a) {
          continue;
        }
        for (std::size_t j = 0; j < labels.size(); ++j) {
          const double x = dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          vol += x;
          boundary += labels[j] != a ? x : 0.0;
        }
      }
      total += boundary / vol / 2;
    }
    CHECK(std::abs(r.ncut_value - total) <= 1e-12);
  }
}

TEST_CASE("permutation equivariance") {
  SbmConfig s;
  s.block_sizes = {40, 40, 40};
  s.p_in = 0.4;
  s.p_out = 0.01;
  s.seed = 5;
  const auto g = sbm_generate(s);
  const std::size_t n = g.labels.size();

  Rng rng(43);
  std::vector<index_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    perm[i] = i;
  }
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
  }
  CooMatrix p(n, n);
  for (std::size_t e = 0; e < g.adjacency.nnz(); ++e) {
    p.push(perm[g.adjacency.rows[e]], perm[g.adjacency.cols[e]], g.adjacency.vals[e]);
  }

  PipelineConfig cfg;
  cfg.input = g.adjacency;
  cfg.k_clusters = 3;
  cfg.isolated_policy = IsolatedPolicy::Remove;
  const auto a = run(cfg);
  cfg.input = coo_canonicalize(p);
  const auto b = run(cfg);

  std::vector<std::size_t> pulled_back(n);
  for (std::size_t i = 0; i < n; ++i) {
    pulled_back[i] = static_cast<std::size_t>(b.labels[perm[i]]);
  }
  CHECK(adjusted_rand_index(to_size(a.labels), pulled_back) == 1.0);
}

TEST_CASE("determinism") {
  SbmConfig s;
  s.block_sizes = {30, 30};
  s.seed = 9;
  const auto g = sbm_generate(s);
  PipelineConfig cfg;
  cfg.input = g.adjacency;
  cfg.isolated_policy = IsolatedPolicy::Remove;
  const auto a = run(cfg);
  const auto b = run(cfg);
  CHECK(a.labels == b.labels);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.ncut_value == b.ncut_value);
}
