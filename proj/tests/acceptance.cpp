// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//   acceptance [--large] [--only N]...
// --large (or SPECCLUST_ACCEPTANCE_LARGE=1) adds the 200 x 100 block run, reported only.

#include "oracles.hpp"

#include <cli.hpp>

#include <specclust/error.hpp>
#include <specclust/io.hpp>
#include <specclust/kmeans.hpp>
#include <specclust/lanczos.hpp>
#include <specclust/laplacian.hpp>
#include <specclust/metrics.hpp>
#include <specclust/pipeline.hpp>
#include <specclust/sbm.hpp>

#include <CLI11.hpp>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace specclust;
using namespace specclust::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

std::vector<std::size_t> labels_or_extra(const std::vector<std::int64_t>& l, std::size_t extra) {
  std::vector<std::size_t> out;
  out.reserve(l.size());
  for (auto v : l) {
    out.push_back(v < 0 ? extra : static_cast<std::size_t>(v));
  }
  return out;
}

// 1. Eigensolver against a dense decomposition.
Outcome eigensolver_oracle() {
  const auto t0 = Clock::now();
  Rng rng(20160101);
  double worst_value = 0, worst_resid = 0, worst_orth = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 20 + rng.uniform_index(181);
    const double density = 0.01 + 0.09 * rng.uniform();
    const auto a = coo_to_csr(random_symmetric(n, density, rng));
    LanczosConfig cfg;
    cfg.k = 1 + rng.uniform_index(10);
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto b = eigensolve(a, cfg);
    const auto dense = to_dense(a);
    const auto ref = dense_eigenvalues_desc(dense);
    const auto v = to_eigen(b.vectors);
    for (std::size_t i = 0; i < cfg.k; ++i) {
      worst_value = std::max(worst_value, std::abs(b.values[i] - ref[i]));
      const Eigen::VectorXd col = v.col(static_cast<Eigen::Index>(i));
      worst_resid = std::max(worst_resid, (dense * col - b.values[i] * col).norm());
    }
    const Eigen::MatrixXd gram = v.transpose() * v - Eigen::MatrixXd::Identity(v.cols(), v.cols());
    worst_orth = std::max(worst_orth, gram.cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst_value <= 1e-8 && worst_resid <= 1e-6 && worst_orth <= 1e-8 && secs < 60.0;
  o.detail = "200 matrices; max |lambda - oracle| " + fmt(worst_value) + ", max residual " +
             fmt(worst_resid) + ", orthonormality defect " + fmt(worst_orth) + ", " + fmt(secs) + " s";
  return o;
}

// 2. Eigenvectors recovered from the symmetric operator solve D^-1 W v = lambda v.
Outcome spectral_equivalence() {
  Rng rng(2);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.uniform_index(62);
    const auto w = coo_to_csr(random_connected_graph(n, 0.15, rng));
    LanczosConfig cfg;
    cfg.k = 1 + rng.uniform_index(std::min<std::size_t>(n - 1, 8));
    cfg.tol = 1e-10;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto emb = spectral_embedding(w, cfg, IsolatedPolicy::Error);
    const auto p = to_dense(row_scale(w, degrees(w)));
    const auto v = to_eigen(emb.vectors);
    for (std::size_t j = 0; j < cfg.k; ++j) {
      const Eigen::VectorXd col = v.col(static_cast<Eigen::Index>(j));
      worst = std::max(worst, (p * col - emb.eigenvalues[j] * col).norm());
    }
  }
  return {worst <= 1e-8, "50 graphs; max |D^-1 W v - lambda v| " + fmt(worst)};
}

// 3. Distance expansion vs naive loops.
Outcome distance_expansion() {
  Rng rng(3);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(200);
    const std::size_t k = 1 + rng.uniform_index(30);
    const std::size_t d = 1 + rng.uniform_index(20);
    DenseMatrix v(n, d), c(k, d);
    for (auto& x : v.data) {
      x = rng.normal();
    }
    for (auto& x : c.data) {
      x = rng.normal();
    }
    const auto s = pairwise_sq_dist(v, c);
    const auto ref = naive_sq_dist(v, c);
    for (std::size_t i = 0; i < n * k; ++i) {
      const double err = std::abs(s.data[i] - ref.data[i]);
      worst = std::max(worst, ref.data[i] > 0 ? err / ref.data[i] : (err > 0 ? INFINITY : 0.0));
    }
  }
  return {worst <= 1e-9, "100 instances; max relative error " + fmt(worst)};
}

// 4. k-means properties and planted blobs.
Outcome kmeans_properties() {
  Rng rng(4);
  std::size_t sse_violations = 0, repeats = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(300);
    const std::size_t d = 1 + rng.uniform_index(8);
    DenseMatrix v(n, d);
    for (auto& x : v.data) {
      x = trial % 4 == 0 ? std::floor(4 * rng.uniform()) : rng.normal();
    }
    KmeansConfig cfg;
    cfg.k = 1 + rng.uniform_index(std::min<std::size_t>(n, 12));
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto r = kmeans(v, cfg);
    for (std::size_t t = 1; t < r.sse_history.size(); ++t) {
      sse_violations += r.sse_history[t] > r.sse_history[t - 1] ? 1 : 0;
    }
    const auto idx = kmeanspp_indices(v, cfg.k, cfg.seed);
    repeats += idx.size() - std::set<std::size_t>(idx.begin(), idx.end()).size();
  }

  const std::vector<std::vector<double>> centres{{0, 0}, {20, 0}, {0, 20}, {20, 20}};
  std::size_t exact = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng blob_rng(static_cast<std::uint64_t>(4000 + seed));
    std::vector<std::size_t> truth;
    const auto x = gaussian_blobs(centres, 100, 1.0, blob_rng, truth);
    KmeansConfig cfg;
    cfg.k = 4;
    cfg.seed = static_cast<std::uint64_t>(seed);
    exact += adjusted_rand_index(kmeans(x, cfg).labels, truth) == 1.0 ? 1 : 0;
  }
  Outcome o;
  o.pass = sse_violations == 0 && repeats == 0 && exact >= 95;
  o.detail = "SSE increases " + std::to_string(sse_violations) + ", repeated seeds " +
             std::to_string(repeats) + ", blobs ARI = 1 in " + std::to_string(exact) + "/100";
  return o;
}

ClusterReport sbm_pipeline(const SbmGraph& g, std::size_t k, std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.input = g.adjacency;
  cfg.k_clusters = k;
  cfg.isolated_policy = IsolatedPolicy::Remove;
  cfg.eigen.seed = seed;
  cfg.kmeans.seed = seed;
  return run(cfg);
}

SbmGraph syn_graph(std::size_t blocks, std::uint64_t seed) {
  SbmConfig s;
  s.block_sizes.assign(blocks, 100);
  s.p_in = 0.3;
  s.p_out = 0.01;
  s.seed = seed;
  return sbm_generate(s);
}

// 5. Scaled planted-partition reproduction.
Outcome sbm_reproduction(bool large) {
  const auto t0 = Clock::now();
  std::size_t good = 0;
  std::string aris;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = syn_graph(20, seed);
    const auto r = sbm_pipeline(g, 20, seed);
    const double ari = adjusted_rand_index(labels_or_extra(r.labels, 20), g.labels);
    good += ari >= 0.95 ? 1 : 0;
    aris += (seed ? "," : "") + fmt(ari);
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = good >= 9 && secs < 120.0;
  o.detail = "20 x 100 blocks: ARI >= 0.95 in " + std::to_string(good) + "/10 seeds [" + aris +
             "], " + fmt(secs) + " s";
  if (large) {
    const auto t1 = Clock::now();
    try {
      const auto g = syn_graph(200, 0);
      const auto r = sbm_pipeline(g, 200, 0);
      const double ari = adjusted_rand_index(labels_or_extra(r.labels, 200), g.labels);
      o.detail += "; 200 x 100 blocks: ARI " + fmt(ari) + " in " + fmt(seconds_since(t1)) + " s";
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail += "; 200 x 100 blocks failed: " + std::string(e.what());
    }
  }
  return o;
}

// 6. Block-diagonal graphs are recovered exactly.
Outcome ideal_case() {
  Rng rng(6);
  std::size_t exact = 0;
  double worst_ncut = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t k = 2 + rng.uniform_index(7);
    std::vector<std::tuple<index_t, index_t, double>> entries;
    std::vector<std::size_t> truth;
    std::size_t offset = 0;
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t size = 2 + rng.uniform_index(40);
      const auto part = random_connected_graph(size, 0.2, rng);
      for (std::size_t e = 0; e < part.nnz(); ++e) {
        entries.emplace_back(part.rows[e] + offset, part.cols[e] + offset, part.vals[e]);
      }
      truth.insert(truth.end(), size, b);
      offset += size;
    }
    CooMatrix w(offset, offset);
    for (const auto& [i, j, v] : entries) {
      w.push(i, j, v);
    }
    PipelineConfig cfg;
    cfg.input = coo_canonicalize(w);
    cfg.k_clusters = k;
    cfg.eigen.seed = seed;
    cfg.kmeans.seed = seed;
    const auto r = run(cfg);
    exact += adjusted_rand_index(labels_or_extra(r.labels, k), truth) == 1.0 ? 1 : 0;
    worst_ncut = std::max(worst_ncut, r.ncut_value);
  }
  return {exact == 20 && worst_ncut == 0.0,
          "ARI = 1 in " + std::to_string(exact) + "/20, max ncut " + fmt(worst_ncut)};
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) {
      return false;
    }
  }
  return true;
}

double awkward(Rng& rng) {
  switch (rng.uniform_index(6)) {
  case 0:
    return rng.normal();
  case 1:
    return std::ldexp(rng.uniform(), static_cast<int>(rng.uniform_index(2000)) - 1000);
  case 2:
    return std::bit_cast<double>(rng.next_u64() & 0x7fefffffffffffffULL) * (rng.uniform() < 0.5 ? -1 : 1);
  case 3:
    return std::numeric_limits<double>::denorm_min() * static_cast<double>(1 + rng.uniform_index(1000));
  case 4:
    return rng.uniform() < 0.5 ? 0.0 : -0.0;
  default:
    return 0.1 * static_cast<double>(rng.uniform_index(100));
  }
}

// 7. Bit-exact round trips.
Outcome roundtrips() {
  Rng rng(7);
  std::size_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t r = 1 + rng.uniform_index(30), c = 1 + rng.uniform_index(30);
    CooMatrix m(r, c);
    const std::size_t nnz = rng.uniform_index(r * c + 1);
    for (std::size_t e = 0; e < nnz; ++e) {
      m.push(rng.uniform_index(r), rng.uniform_index(c), awkward(rng));
    }
    // Canonical form without duplicates so sums do not round.
    auto canon = coo_canonicalize(m);
    CooMatrix uniq(r, c);
    for (std::size_t e = 0; e < m.nnz(); ++e) {
      bool seen = false;
      for (std::size_t f = 0; f < e && !seen; ++f) {
        seen = m.rows[f] == m.rows[e] && m.cols[f] == m.cols[e];
      }
      if (!seen) {
        uniq.push(m.rows[e], m.cols[e], m.vals[e]);
      }
    }
    canon = coo_canonicalize(uniq);

    const auto back = csr_to_coo(coo_to_csr(canon));
    bool ok = back.rows == canon.rows && back.cols == canon.cols && same_bits(back.vals, canon.vals);

    std::stringstream sparse;
    io::write_sparse(sparse, canon);
    const auto read = io::read_sparse(sparse);
    ok = ok && read.rows == canon.rows && read.cols == canon.cols && same_bits(read.vals, canon.vals);

    DenseMatrix d(r, c);
    for (auto& x : d.data) {
      x = awkward(rng);
    }
    std::stringstream dense;
    io::write_dense(dense, d);
    const auto dr = io::read_dense(dense);
    ok = ok && dr.rows == r && dr.cols == c && same_bits(dr.data, d.data);

    std::vector<std::int64_t> labels(r);
    for (auto& l : labels) {
      l = static_cast<std::int64_t>(rng.next_u64() >> 1) * (rng.uniform() < 0.1 ? -1 : 1);
    }
    std::stringstream ls;
    io::write_labels(ls, labels);
    ok = ok && io::read_labels(ls) == labels;

    EdgeList edges;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        if (rng.uniform() < 0.2) {
          edges.pairs.emplace_back(i, j);
        }
      }
    }
    std::stringstream es;
    io::write_edges(es, edges);
    ok = ok && io::read_edges(es) == edges;

    failures += ok ? 0 : 1;
  }
  return {failures == 0, "1000 instances (COO/CSR, sparse, dense, labels, edges); failures " +
                             std::to_string(failures)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 8. Same labels for 1 and 8 threads through the command-line tool.
Outcome thread_independence() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("specclust_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  std::ostringstream sink;
  std::size_t identical = 0;
  const std::uint64_t seeds = 3;
  bool ran = true;
  for (std::uint64_t seed = 0; seed < seeds && ran; ++seed) {
    const std::string s = std::to_string(seed);
    const auto w = (dir / ("w" + s + ".txt")).string();
    ran = cli::run_cli({"gen-sbm", "--blocks", "100,100,100,100,100,100,100,100,100,100,100,100,100,100,100,100,100,100,100,100",
                        "--p-in", "0.3", "--p-out", "0.01", "--seed", s, "--out-matrix", w},
                       sink, sink) == 0;
    std::string files[2];
    int t = 0;
    for (const char* threads : {"1", "8"}) {
      files[t] = (dir / ("l" + s + "_" + threads + ".txt")).string();
      ran = ran && cli::run_cli({"--threads", threads, "cluster", "--matrix", w, "--k", "20", "--seed", s,
                                 "--isolated", "remove", "--out-labels", files[t]},
                                sink, sink) == 0;
      ++t;
    }
    identical += ran && slurp(files[0]) == slurp(files[1]) && !slurp(files[0]).empty() ? 1 : 0;
  }
  std::ostringstream restore_out, restore_err;
  cli::run_cli({"--threads", "0", "eval", "--matrix", (dir / "w0.txt").string(), "--labels",
                (dir / "l0_1.txt").string()},
               restore_out, restore_err);
  fs::remove_all(dir);
  return {ran && identical == seeds,
          "criterion-5 workload, " + std::to_string(seeds) + " seeds: bit-identical label files " +
              std::to_string(identical) + "/" + std::to_string(seeds) + " (--threads 1 vs 8)"};
}

// 9. Metric hand values and ARI relabelling.
Outcome metric_values() {
  CooMatrix m(3, 3);
  m.push(0, 1, 1);
  m.push(1, 0, 1);
  m.push(1, 2, 1);
  m.push(2, 1, 1);
  const auto w = coo_to_csr(m);
  const Partition p{{0, 1, 1}, 2};
  const double nc = ncut(w, p), rc = ratio_cut(w, p);
  bool ok = std::abs(nc - 2.0 / 3.0) <= 1e-15 && rc == 0.75;

  Rng rng(9);
  std::size_t invariant = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(200);
    const std::size_t k = 1 + rng.uniform_index(10);
    std::vector<std::size_t> a(n), b(n), perm(k);
    for (std::size_t i = 0; i < k; ++i) {
      perm[i] = i + 100;
    }
    for (std::size_t i = k; i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform_index(k);
      b[i] = perm[a[i]];
    }
    invariant += adjusted_rand_index(a, b) == 1.0 ? 1 : 0;
  }
  ok = ok && invariant == 100;
  return {ok, "ncut " + io::format_double(nc) + ", ratio_cut " + io::format_double(rc) +
                  ", ARI = 1 under relabelling in " + std::to_string(invariant) + "/100"};
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  bool large = false;
  std::vector<int> only;
  app.add_flag("--large", large, "Also run the 200-block planted partition (reported only)");
  app.add_option("--only", only, "Run only these criteria (1-9)");
  CLI11_PARSE(app, argc, argv);
  if (const char* env = std::getenv("SPECCLUST_ACCEPTANCE_LARGE"); env && std::string(env) == "1") {
    large = true;
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria{
      {1, "eigensolver oracle suite", eigensolver_oracle},
      {2, "spectral equivalence of the symmetric operator", spectral_equivalence},
      {3, "distance expansion identity", distance_expansion},
      {4, "k-means properties", kmeans_properties},
      {5, "planted partition reproduction", [large] { return sbm_reproduction(large); }},
      {6, "ideal-case exactness", ideal_case},
      {7, "format round trips", roundtrips},
      {8, "determinism and thread independence", thread_independence},
      {9, "metric hand values", metric_values},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) {
      continue;
    }
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
