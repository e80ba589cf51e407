#include <doctest.h>

#include "oracles.hpp"

#include <specclust/error.hpp>
#include <specclust/graph.hpp>

#include <cmath>

using namespace specclust;

namespace {

PointMatrix points(std::initializer_list<std::initializer_list<double>> rows) {
  PointMatrix x(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double v : r) {
      x(i, j++) = v;
    }
    ++i;
  }
  return x;
}

using Pairs = std::vector<std::pair<index_t, index_t>>;

} // namespace

TEST_CASE("similarity measures on hand examples") {
  const std::vector<double> e1{1, 0}, e2{0, 1};
  CHECK(similarity(e1, e2, SimilarityMeasure::cosine()) == 0.0);
  const std::vector<double> a{1, 1}, b{1, -1};
  CHECK(similarity(a, b, SimilarityMeasure::cosine()) == 0.0);

  const std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  CHECK(similarity(x, y, SimilarityMeasure::cross_correlation()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(similarity(x, x, SimilarityMeasure::exp_decay(1.0)) == 1.0);

  // Gaussian kernel: |x - y|^2 = 27, sigma = 3 -> exp(-27 / 18).
  CHECK(similarity(x, y, SimilarityMeasure::exp_decay(3.0)) ==
        doctest::Approx(std::exp(-1.5)).epsilon(1e-15));
}

TEST_CASE("similarity errors") {
  const std::vector<double> zero{0, 0}, one{1, 0};
  try {
    similarity(zero, one, SimilarityMeasure::cosine());
    FAIL("expected DegenerateVector");
  } catch (const DegenerateVectorError& e) {
    CHECK(e.code() == ErrorCode::DegenerateVector);
    CHECK(e.index() == 0);
  }
  const std::vector<double> flat{0.1, 0.1, 0.1}, ramp{1, 2, 3};
  CHECK_THROWS_AS(similarity(ramp, flat, SimilarityMeasure::cross_correlation()),
                  DegenerateVectorError);
  CHECK_THROWS_AS(similarity(ramp, one, SimilarityMeasure::cosine()), Error);
  CHECK_THROWS_AS(similarity(one, one, SimilarityMeasure::exp_decay(0.0)), Error);
}

TEST_CASE("similarity is symmetric and scale invariant") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng.uniform_index(8);
    std::vector<double> x(d), y(d);
    for (std::size_t l = 0; l < d; ++l) {
      x[l] = rng.normal();
      y[l] = rng.normal();
    }
    for (auto m : {SimilarityMeasure::cosine(), SimilarityMeasure::cross_correlation(),
                   SimilarityMeasure::exp_decay(0.7)}) {
      CHECK(similarity(x, y, m) == similarity(y, x, m));
    }
    const double alpha = 0.1 + 5.0 * rng.uniform();
    const double beta = 0.1 + 5.0 * rng.uniform();
    const double shift = rng.normal() * 3.0;
    std::vector<double> xs(d), ys(d), xa(d);
    for (std::size_t l = 0; l < d; ++l) {
      xs[l] = alpha * x[l];
      ys[l] = beta * y[l];
      xa[l] = alpha * x[l] + shift;
    }
    const auto cos = SimilarityMeasure::cosine();
    const auto cc = SimilarityMeasure::cross_correlation();
    CHECK(std::abs(similarity(xs, ys, cos) - similarity(x, y, cos)) <= 1e-12);
    CHECK(std::abs(similarity(xa, ys, cc) - similarity(x, y, cc)) <= 1e-12);
  }
}

TEST_CASE("epsilon graph") {
  CHECK(build_edges_eps(points({{0, 0}, {1, 0}, {5, 0}}), 1.5).pairs == Pairs{{0, 1}});
  CHECK(build_edges_eps(points({{0, 0}, {1, 0}, {5, 0}}), 0.5).pairs.empty());
  CHECK(build_edges_eps(points({{2, 2}, {2, 2}, {2, 2}}), 0.1).pairs == Pairs{{0, 1}, {0, 2}, {1, 2}});
  CHECK_THROWS_AS(build_edges_eps(points({{0, 0}}), 0.0), Error);
}

TEST_CASE("epsilon graph matches brute force") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(200);
    PointMatrix x(n, 3);
    for (auto& v : x.data) {
      v = rng.uniform();
    }
    const double eps = 0.05 + 0.3 * rng.uniform();
    Pairs expect;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double sq = 0.0;
        for (std::size_t l = 0; l < 3; ++l) {
          sq += (x(i, l) - x(j, l)) * (x(i, l) - x(j, l));
        }
        if (std::sqrt(sq) <= eps) {
          expect.emplace_back(i, j);
        }
      }
    }
    CHECK(build_edges_eps(x, eps).pairs == expect);
  }
}

TEST_CASE("knn graph") {
  // Brute-force ranking: 0's nearest is 1, 1's nearest is 0, 2's nearest is 1.
  const auto x = points({{0}, {1}, {10}});
  CHECK(build_edges_knn(x, 1, SimilarityMeasure::exp_decay(1.0)).pairs == Pairs{{0, 1}, {1, 2}});

  const auto y = points({{0, 1}, {3, 1}, {1, 7}, {5, 5}});
  CHECK(build_edges_knn(y, 3, SimilarityMeasure::exp_decay(1.0)).size() == 6);

  const auto dup = points({{0.0}, {5.0}, {5.0}, {20.0}});
  const auto e = build_edges_knn(dup, 1, SimilarityMeasure::exp_decay(1.0));
  CHECK(std::find(e.pairs.begin(), e.pairs.end(), std::pair<index_t, index_t>{1, 2}) != e.pairs.end());

  CHECK_THROWS_AS(build_edges_knn(x, 3, SimilarityMeasure::exp_decay(1.0)), Error);
}

TEST_CASE("knn ties go to the lower index") {
  // Point 1 is equidistant from 0 and 2; with knn = 1 it links to 0.
  const auto x = points({{0}, {1}, {2}, {50}});
  const auto e = build_edges_knn(x, 1, SimilarityMeasure::exp_decay(10.0));
  CHECK(e.pairs == Pairs{{0, 1}, {1, 2}, {2, 3}});
}

TEST_CASE("threshold graph") {
  const auto x = points({{1, 0}, {0, 1}, {1, 1}});
  CHECK(build_edges_threshold(x, 0.5, SimilarityMeasure::cosine()).pairs == Pairs{{0, 2}, {1, 2}});
  CHECK(build_edges_threshold(x, 1.0, SimilarityMeasure::cosine()).pairs.empty());
  CHECK(build_edges_threshold(x, -2.0, SimilarityMeasure::cosine()).size() == 3);
  CHECK_THROWS_AS(build_edges_threshold(points({{0, 0}, {1, 1}}), 0.0, SimilarityMeasure::cosine()),
                  DegenerateVectorError);
}

TEST_CASE("build_similarity") {
  const auto x = points({{1, 2, 3}, {4, 5, 6}});
  EdgeList e;
  e.pairs = {{0, 1}};
  const auto w = build_similarity(x, e, SimilarityMeasure::cross_correlation(), NegativePolicy::Keep);
  CHECK(w.rows == std::vector<index_t>{0, 1});
  CHECK(w.cols == std::vector<index_t>{1, 0});
  CHECK(w.vals[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.vals[0] == w.vals[1]);

  const auto anti = points({{1, 2, 3}, {3, 2, 1}});
  const auto clamp = build_similarity(anti, e, SimilarityMeasure::cross_correlation(),
                                      NegativePolicy::ClampZero);
  CHECK(clamp.vals == std::vector<double>{0.0, 0.0});
  const auto absv = build_similarity(anti, e, SimilarityMeasure::cross_correlation(),
                                     NegativePolicy::Abs);
  CHECK(absv.vals[0] == doctest::Approx(1.0));
  const auto keep = build_similarity(anti, e, SimilarityMeasure::cross_correlation(),
                                     NegativePolicy::Keep);
  CHECK(keep.vals[0] == doctest::Approx(-1.0));

  const auto empty = build_similarity(x, EdgeList{}, SimilarityMeasure::cosine());
  CHECK(empty.n_rows == 2);
  CHECK(empty.nnz() == 0);

  const auto flat = points({{1, 1, 1}, {1, 2, 3}, {0, 5, 1}});
  EdgeList touches_flat;
  touches_flat.pairs = {{1, 0}};
  try {
    build_similarity(flat, touches_flat, SimilarityMeasure::cross_correlation());
    FAIL("expected DegenerateVector");
  } catch (const DegenerateVectorError& err) {
    CHECK(err.index() == 0);
  }

  EdgeList bad;
  bad.pairs = {{0, 0}};
  CHECK_THROWS_AS(build_similarity(x, bad, SimilarityMeasure::cosine()), Error);
  bad.pairs = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(build_similarity(x, bad, SimilarityMeasure::cosine()), Error);
}

TEST_CASE("similarity matrix is exactly symmetric without self-loops") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + rng.uniform_index(60);
    PointMatrix x(n, 4);
    for (auto& v : x.data) {
      v = rng.normal();
    }
    const auto e = build_edges_knn(x, 3, SimilarityMeasure::cross_correlation());
    const auto w = build_similarity(x, e, SimilarityMeasure::cross_correlation(), NegativePolicy::Keep);
    CHECK(w.nnz() == 2 * e.size());
    const auto csr = coo_to_csr(w);
    CHECK(is_structurally_symmetric(csr));
    for (std::size_t k = 0; k < w.nnz(); ++k) {
      CHECK(w.rows[k] != w.cols[k]);
    }
  }
}
