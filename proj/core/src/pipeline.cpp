#include "specclust/pipeline.hpp"

#include "specclust/error.hpp"
#include "specclust/metrics.hpp"
#include "specclust/symmetric_eigen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>

namespace specclust {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ConvergenceError& e) {
    double worst = 0.0;
    for (double r : e.residuals()) {
      worst = std::max(worst, r);
    }
    throw StageError(name, e.code(),
                     std::string(e.what()) + " (largest residual estimate " +
                         std::to_string(worst) + ")");
  } catch (const Error& e) {
    throw StageError(name, e.code(), e.what());
  }
}

// All eigenpairs at once when k equals the node count.
EigenBasis dense_top_k(const CsrMatrix& a, std::size_t k) {
  const std::size_t n = a.n_rows;
  DenseMatrix dense(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      dense(i, a.col_idx[p]) = a.vals[p];
    }
  }
  auto eig = symmetric_eigen(dense);
  EigenBasis out;
  out.values.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
  out.vectors = DenseMatrix(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      out.vectors(i, j) = eig.vectors(i, j);
    }
  }
  std::vector<double> col(n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = out.vectors(i, j);
    }
    const auto ac = spmv(a, col);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = ac[i] - out.values[j] * col[i];
      sq += d * d;
    }
    out.residuals.push_back(std::sqrt(sq));
  }
  return out;
}

} // namespace

CooMatrix build_graph(const PointsInput& input, NegativePolicy negative) {
  EdgeList edges;
  switch (input.pattern) {
  case GraphPattern::Epsilon:
    edges = build_edges_eps(input.points, input.eps);
    break;
  case GraphPattern::Knn:
    edges = build_edges_knn(input.points, input.knn, input.measure);
    break;
  case GraphPattern::Threshold:
    edges = build_edges_threshold(input.points, input.lambda, input.measure);
    break;
  case GraphPattern::Given:
    edges = input.edges;
    break;
  }
  return build_similarity(input.points, edges, input.measure, negative);
}

SpectralEmbedding spectral_embedding(const CsrMatrix& w, const LanczosConfig& cfg,
                                     IsolatedPolicy isolated) {
  SpectralEmbedding out;
  auto t0 = Clock::now();
  CsrMatrix op = stage("laplacian", [&] {
    const auto d = degrees(w);
    out.graph = handle_isolated(w, d, isolated);
    return sym_scale(out.graph.w, out.graph.deg);
  });
  out.laplacian_ms = elapsed_ms(t0);

  t0 = Clock::now();
  const std::size_t n = op.n_rows;
  EigenBasis basis = stage("eigensolve", [&] {
    if (cfg.k == n && n > 0) {
      return dense_top_k(op, cfg.k);
    }
    return eigensolve(op, cfg);
  });
  out.eigenvalues = basis.values;
  out.residuals = basis.residuals;
  out.restarts = basis.restarts;
  out.matvecs = basis.matvecs;
  out.vectors = stage("eigensolve", [&] {
    return recover_row_eigvecs(basis.vectors, out.graph.deg);
  });
  out.eigen_ms = elapsed_ms(t0);
  return out;
}

ClusterReport run(const PipelineConfig& cfg) {
  if (cfg.k_clusters < 2) {
    throw StageError("config", ErrorCode::InvalidArgument, "k_clusters must be >= 2");
  }
  ClusterReport report;

  auto t0 = Clock::now();
  CsrMatrix w = stage("graph", [&] {
    if (const auto* m = std::get_if<CooMatrix>(&cfg.input)) {
      if (m->n_rows != m->n_cols) {
        throw Error(ErrorCode::NotSquare, "similarity matrix must be square");
      }
      return coo_to_csr(coo_canonicalize(*m));
    }
    return coo_to_csr(build_graph(std::get<PointsInput>(cfg.input), cfg.negative_policy));
  });
  report.timings.push_back({"graph", elapsed_ms(t0)});

  const std::size_t n_input = w.n_rows;
  if (cfg.k_clusters > n_input) {
    throw StageError("config", ErrorCode::InvalidArgument,
                     "k_clusters (" + std::to_string(cfg.k_clusters) +
                         ") exceeds the number of nodes (" + std::to_string(n_input) + ")");
  }
  for (double v : w.vals) {
    if (v < 0.0) {
      report.warnings.push_back("similarity matrix has negative weights");
      break;
    }
  }

  LanczosConfig ecfg = cfg.eigen;
  ecfg.k = cfg.k_clusters;
  if (cfg.isolated_policy == IsolatedPolicy::Remove) {
    // Validate the node count after removal before sizing the subspace.
    const auto d = degrees(w);
    const auto kept = static_cast<std::size_t>(
        std::count_if(d.values.begin(), d.values.end(), [](double x) { return x != 0.0; }));
    if (kept < cfg.k_clusters) {
      throw StageError("laplacian", ErrorCode::InvalidArgument,
                       "only " + std::to_string(kept) + " non-isolated nodes for " +
                           std::to_string(cfg.k_clusters) + " clusters");
    }
  }
  auto emb = spectral_embedding(w, ecfg, cfg.isolated_policy);
  report.timings.push_back({"laplacian", emb.laplacian_ms});
  report.timings.push_back({"eigensolve", emb.eigen_ms});
  report.eigenvalues = emb.eigenvalues;
  report.eigen_residuals = emb.residuals;
  report.eigen_restarts = emb.restarts;
  report.eigen_matvecs = emb.matvecs;
  report.removed_nodes = emb.graph.removed;
  if (!report.removed_nodes.empty()) {
    report.warnings.push_back("removed " + std::to_string(report.removed_nodes.size()) +
                              " isolated node(s)");
  }

  t0 = Clock::now();
  report.labeling = stage("kmeans", [&] {
    KmeansConfig kcfg = cfg.kmeans;
    kcfg.k = cfg.k_clusters;
    return kmeans(cfg.normalize_rows ? normalize_rows(emb.vectors) : emb.vectors, kcfg);
  });
  report.timings.push_back({"kmeans", elapsed_ms(t0)});
  if (report.labeling.reseeds > 0) {
    report.warnings.push_back("k-means re-seeded " + std::to_string(report.labeling.reseeds) +
                              " empty cluster(s)");
  }

  t0 = Clock::now();
  report.labels.assign(n_input, -1);
  for (std::size_t i = 0; i < emb.graph.new_to_old.size(); ++i) {
    report.labels[emb.graph.new_to_old[i]] =
        static_cast<std::int64_t>(report.labeling.labels[i]);
  }
  report.ncut_value = stage("metrics", [&] {
    return ncut(emb.graph.w, Partition{report.labeling.labels, cfg.k_clusters});
  });
  report.timings.push_back({"metrics", elapsed_ms(t0)});
  return report;
}

} // namespace specclust
