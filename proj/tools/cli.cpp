#include "cli.hpp"

#include <specclust/error.hpp>
#include <specclust/graph.hpp>
#include <specclust/io.hpp>
#include <specclust/kmeans.hpp>
#include <specclust/lanczos.hpp>
#include <specclust/laplacian.hpp>
#include <specclust/metrics.hpp>
#include <specclust/parallel.hpp>
#include <specclust/pipeline.hpp>
#include <specclust/sbm.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace specclust::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct GraphOptions {
  std::string points;
  std::string pattern = "eps";
  double eps = 1.0;
  std::size_t knn = 10;
  double lambda = 0.0;
  std::string measure = "xcorr";
  double sigma = 1.0;
  std::string negative = "clamp";
  std::string edges;
};

struct EigenOptions {
  std::size_t m = 0;
  double tol = 1e-8;
  std::size_t max_restarts = 300;
  std::string isolated = "error";
};

struct KmeansOptions {
  std::size_t max_iters = 300;
  std::string init = "kmeanspp";
  std::size_t tol_changes = 0;
  std::size_t restarts = 10;
  std::size_t local_trials = 0;
  bool normalize_rows = false;
};

const std::map<std::string, GraphPattern> kPatterns{
    {"eps", GraphPattern::Epsilon},
    {"knn", GraphPattern::Knn},
    {"threshold", GraphPattern::Threshold},
    {"edges", GraphPattern::Given},
};
const std::map<std::string, MeasureKind> kMeasures{
    {"cosine", MeasureKind::Cosine},
    {"xcorr", MeasureKind::CrossCorrelation},
    {"expdecay", MeasureKind::ExpDecay},
};
const std::map<std::string, NegativePolicy> kNegative{
    {"clamp", NegativePolicy::ClampZero},
    {"abs", NegativePolicy::Abs},
    {"keep", NegativePolicy::Keep},
};
const std::map<std::string, IsolatedPolicy> kIsolated{
    {"error", IsolatedPolicy::Error},
    {"remove", IsolatedPolicy::Remove},
};
const std::map<std::string, KmeansInit> kInit{
    {"kmeanspp", KmeansInit::KmeansPlusPlus},
    {"random", KmeansInit::RandomPoints},
};

template <class T>
CLI::Option* add_choice(CLI::App* app, const std::string& name, std::string& target,
                        const std::map<std::string, T>& choices, const std::string& help) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : choices) {
    keys.push_back(k);
  }
  return app->add_option(name, target, help)->check(CLI::IsMember(keys))->capture_default_str();
}

void add_graph_options(CLI::App* app, GraphOptions& g) {
  add_choice(app, "--pattern", g.pattern, kPatterns, "Sparsity pattern");
  app->add_option("--eps", g.eps, "Distance cut-off for --pattern eps")->capture_default_str();
  app->add_option("--knn", g.knn, "Neighbours per point for --pattern knn")->capture_default_str();
  app->add_option("--lambda", g.lambda, "Similarity threshold for --pattern threshold")
      ->capture_default_str();
  add_choice(app, "--measure", g.measure, kMeasures, "Similarity measure");
  app->add_option("--sigma", g.sigma, "Bandwidth of expdecay")->capture_default_str();
  add_choice(app, "--negative", g.negative, kNegative, "Handling of negative similarities");
  app->add_option("--edges", g.edges, "Edge list file for --pattern edges");
}

void add_eigen_options(CLI::App* app, EigenOptions& e) {
  app->add_option("--m", e.m, "Lanczos subspace dimension (0: automatic)")->capture_default_str();
  app->add_option("--tol", e.tol, "Relative residual tolerance")->capture_default_str();
  app->add_option("--max-restarts", e.max_restarts, "Lanczos restart budget")
      ->capture_default_str();
  add_choice(app, "--isolated", e.isolated, kIsolated, "Zero-degree node handling");
}

void add_kmeans_options(CLI::App* app, KmeansOptions& k) {
  app->add_option("--max-iters", k.max_iters, "Lloyd iteration cap")->capture_default_str();
  add_choice(app, "--init", k.init, kInit, "Seeding");
  app->add_option("--tol-changes", k.tol_changes, "Stop when label changes <= this")
      ->capture_default_str();
  app->add_option("--restarts", k.restarts, "Independent seedings; lowest SSE wins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--local-trials", k.local_trials,
                  "k-means++ candidates per step (0: 2 + ln k, 1: plain sampling)")
      ->capture_default_str();
  app->add_flag("--normalize-rows", k.normalize_rows, "Scale embedding rows to unit length");
}

PointsInput points_input(const GraphOptions& g) {
  PointsInput in;
  in.points = io::load_dense(g.points);
  in.pattern = kPatterns.at(g.pattern);
  in.eps = g.eps;
  in.knn = g.knn;
  in.lambda = g.lambda;
  in.measure = {kMeasures.at(g.measure), g.sigma};
  if (in.pattern == GraphPattern::Given) {
    if (g.edges.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--pattern edges needs --edges");
    }
    in.edges = io::load_edges(g.edges);
  }
  return in;
}

LanczosConfig eigen_config(const EigenOptions& e, std::size_t k, std::uint64_t seed) {
  LanczosConfig c;
  c.k = k;
  c.m = e.m;
  c.tol = e.tol;
  c.max_restarts = e.max_restarts;
  c.seed = seed;
  return c;
}

KmeansConfig kmeans_config(const KmeansOptions& o, std::size_t k, std::uint64_t seed) {
  KmeansConfig c;
  c.k = k;
  c.max_iters = o.max_iters;
  c.init = kInit.at(o.init);
  c.tol_changes = o.tol_changes;
  c.restarts = o.restarts;
  c.local_trials = o.local_trials;
  c.seed = seed;
  return c;
}

std::vector<std::size_t> parse_blocks(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || item.empty() || item[0] == '-') {
      throw CLI::ValidationError("--blocks", "expected comma-separated sizes, got '" + s + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<std::size_t> as_partition_labels(const std::vector<std::int64_t>& labels,
                                             const char* what) {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (auto v : labels) {
    if (v < 0) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(what) + " contains unlabelled (negative) entries");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s += (i ? "," : "") + io::format_double(values[i]);
  }
  return s;
}

/// key=value lines, '#' comments; each becomes `--key=value`.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  }
  std::vector<std::string> tokens;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    line = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw Error(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ": bad key");
    }
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

/// Splices the contents of `--config FILE` in front of the cluster options
/// so explicit flags override file values.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  auto sub = std::find(args.begin(), args.end(), "cluster");
  if (sub == args.end()) {
    return args;
  }
  std::vector<std::string> head(args.begin(), sub + 1);
  std::vector<std::string> rest;
  std::vector<std::string> spliced;
  for (auto it = sub + 1; it != args.end(); ++it) {
    std::string path;
    if (*it == "--config" && it + 1 != args.end()) {
      path = *++it;
    } else if (it->rfind("--config=", 0) == 0) {
      path = it->substr(9);
    } else {
      rest.push_back(*it);
      continue;
    }
    const auto t = config_tokens(path);
    spliced.insert(spliced.end(), t.begin(), t.end());
  }
  head.insert(head.end(), spliced.begin(), spliced.end());
  head.insert(head.end(), rest.begin(), rest.end());
  return head;
}

class StageFailure : public std::runtime_error {
public:
  StageFailure(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

template <class Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageFailure(e.code() == ErrorCode::Io ? "io" : stage,
                       std::string(to_string(e.code())) + ": " + e.what());
  }
}

} // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral clustering of graphs and point sets", "specclust"};
  app.require_subcommand(1, 1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: OpenMP default)")
      ->check(CLI::NonNegativeNumber);

  std::function<void()> action;

  // gen-sbm
  auto* gen = app.add_subcommand("gen-sbm", "Generate a stochastic block model graph");
  std::string blocks;
  SbmConfig sbm;
  std::string sbm_matrix, sbm_labels;
  gen->add_option("--blocks", blocks, "Comma-separated block sizes")->required();
  gen->add_option("--p-in", sbm.p_in, "Edge probability inside a block")->capture_default_str();
  gen->add_option("--p-out", sbm.p_out, "Edge probability across blocks")->capture_default_str();
  gen->add_option("--seed", sbm.seed, "RNG seed")->capture_default_str();
  gen->add_option("--out-matrix", sbm_matrix, "Adjacency matrix file")->required();
  gen->add_option("--out-labels", sbm_labels, "Ground-truth labels file");
  gen->callback([&] {
    sbm.block_sizes = parse_blocks(blocks);
    action = [&] {
      const auto g = in_stage("sbm", [&] { return sbm_generate(sbm); });
      in_stage("io", [&] {
        io::save_sparse(sbm_matrix, g.adjacency);
        if (!sbm_labels.empty()) {
          std::vector<std::int64_t> l(g.labels.begin(), g.labels.end());
          io::save_labels(sbm_labels, l);
        }
      });
      out << "nodes=" << g.labels.size() << "\nedges=" << g.adjacency.nnz() / 2 << "\n";
    };
  });

  // build-graph
  auto* build = app.add_subcommand("build-graph", "Similarity matrix from a points file");
  GraphOptions bg;
  std::string bg_out;
  build->add_option("--points", bg.points, "Dense points file")->required();
  add_graph_options(build, bg);
  build->add_option("--out", bg_out, "Output matrix file")->required();
  build->callback([&] {
    action = [&] {
      const auto in = in_stage("io", [&] { return points_input(bg); });
      const auto w = in_stage("graph", [&] { return build_graph(in, kNegative.at(bg.negative)); });
      in_stage("io", [&] { io::save_sparse(bg_out, w); });
      out << "nodes=" << w.n_rows << "\nedges=" << w.nnz() / 2 << "\n";
    };
  });

  // eigensolve
  auto* eig = app.add_subcommand("eigensolve", "Top-k eigenpairs of a matrix file");
  std::string eig_matrix, eig_vectors, eig_operator = "normalized";
  std::size_t eig_k = 2;
  std::uint64_t eig_seed = 0;
  EigenOptions eo;
  eig->add_option("--matrix", eig_matrix, "Sparse matrix file")->required();
  eig->add_option("--k", eig_k, "Number of eigenpairs")->capture_default_str();
  eig->add_option("--seed", eig_seed, "Start-vector seed")->capture_default_str();
  add_eigen_options(eig, eo);
  eig->add_option("--operator", eig_operator,
                  "normalized: eigenvectors of D^-1 W; raw: the matrix itself")
      ->check(CLI::IsMember({"normalized", "raw"}))
      ->capture_default_str();
  eig->add_option("--out-vectors", eig_vectors, "Eigenvector matrix file (n x k)");
  eig->callback([&] {
    action = [&] {
      const auto w = in_stage("io", [&] { return coo_to_csr(io::load_sparse(eig_matrix)); });
      const auto cfg = eigen_config(eo, eig_k, eig_seed);
      std::vector<double> values;
      DenseMatrix vectors;
      if (eig_operator == "raw") {
        auto b = in_stage("eigensolve", [&] { return eigensolve(w, cfg); });
        values = b.values;
        vectors = std::move(b.vectors);
      } else {
        auto emb = spectral_embedding(w, cfg, kIsolated.at(eo.isolated));
        values = emb.eigenvalues;
        vectors = std::move(emb.vectors);
      }
      for (double v : values) {
        out << io::format_double(v) << "\n";
      }
      if (!eig_vectors.empty()) {
        in_stage("io", [&] { io::save_dense(eig_vectors, vectors); });
      }
    };
  });

  // kmeans
  auto* km = app.add_subcommand("kmeans", "k-means on the rows of a dense matrix file");
  std::string km_input, km_labels;
  std::size_t km_k = 2;
  std::uint64_t km_seed = 0;
  KmeansOptions ko;
  km->add_option("--input", km_input, "Dense matrix file")->required();
  km->add_option("--k", km_k, "Number of clusters")->capture_default_str();
  km->add_option("--seed", km_seed, "Seeding RNG seed")->capture_default_str();
  add_kmeans_options(km, ko);
  km->add_option("--out-labels", km_labels, "Labels file");
  km->callback([&] {
    action = [&] {
      auto v = in_stage("io", [&] { return io::load_dense(km_input); });
      const auto r = in_stage("kmeans", [&] {
        return kmeans(ko.normalize_rows ? normalize_rows(std::move(v)) : v,
                      kmeans_config(ko, km_k, km_seed));
      });
      if (!km_labels.empty()) {
        std::vector<std::int64_t> l(r.labels.begin(), r.labels.end());
        in_stage("io", [&] { io::save_labels(km_labels, l); });
      }
      out << "sse=" << io::format_double(r.sse) << "\niters=" << r.iters_run << "\n";
    };
  });

  // cluster
  auto* cl = app.add_subcommand("cluster", "Full spectral clustering pipeline");
  std::string cl_matrix, cl_labels;
  GraphOptions cg;
  EigenOptions ce;
  KmeansOptions ck;
  std::size_t cl_k = 2;
  std::uint64_t cl_seed = 0;
  std::optional<std::uint64_t> cl_eigen_seed, cl_kmeans_seed;
  cl->add_option("--config", "key=value file; explicit flags take precedence");
  auto* in_matrix = cl->add_option("--matrix", cl_matrix, "Similarity matrix file");
  auto* in_points = cl->add_option("--points", cg.points, "Dense points file");
  in_matrix->excludes(in_points);
  add_graph_options(cl, cg);
  cl->add_option("--k", cl_k, "Number of clusters")->capture_default_str();
  cl->add_option("--seed", cl_seed, "Seed for both the eigensolver and k-means")
      ->capture_default_str();
  cl->add_option("--eigen-seed", cl_eigen_seed, "Eigensolver seed (overrides --seed)");
  cl->add_option("--kmeans-seed", cl_kmeans_seed, "k-means seed (overrides --seed)");
  add_eigen_options(cl, ce);
  add_kmeans_options(cl, ck);
  cl->add_option("--out-labels", cl_labels, "Labels file (-1 marks removed nodes)");
  cl->callback([&] {
    if (cl_matrix.empty() && cg.points.empty()) {
      throw CLI::RequiredError("--matrix or --points");
    }
    action = [&] {
      const auto t0 = Clock::now();
      PipelineConfig cfg;
      if (!cl_matrix.empty()) {
        cfg.input = in_stage("io", [&] { return io::load_sparse(cl_matrix); });
      } else {
        cfg.input = in_stage("io", [&] { return points_input(cg); });
      }
      cfg.k_clusters = cl_k;
      cfg.eigen = eigen_config(ce, cl_k, cl_eigen_seed.value_or(cl_seed));
      cfg.kmeans = kmeans_config(ck, cl_k, cl_kmeans_seed.value_or(cl_seed));
      cfg.isolated_policy = kIsolated.at(ce.isolated);
      cfg.negative_policy = kNegative.at(cg.negative);
      cfg.normalize_rows = ck.normalize_rows;
      const auto report = run(cfg);
      if (!cl_labels.empty()) {
        in_stage("io", [&] { io::save_labels(cl_labels, report.labels); });
      }
      for (const auto& w : report.warnings) {
        err << "warning: " << w << "\n";
      }
      const double total =
          std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      out << "nodes=" << report.labels.size() << "\n"
          << "clusters=" << cl_k << "\n"
          << "removed_nodes=" << report.removed_nodes.size() << "\n"
          << "eigenvalues=" << join(report.eigenvalues) << "\n"
          << "eigen_residual_max="
          << io::format_double(report.eigen_residuals.empty()
                                   ? 0.0
                                   : *std::max_element(report.eigen_residuals.begin(),
                                                       report.eigen_residuals.end()))
          << "\n"
          << "eigen_restarts=" << report.eigen_restarts << "\n"
          << "eigen_matvecs=" << report.eigen_matvecs << "\n"
          << "sse=" << io::format_double(report.labeling.sse) << "\n"
          << "kmeans_iters=" << report.labeling.iters_run << "\n"
          << "ncut=" << io::format_double(report.ncut_value) << "\n";
      for (const auto& t : report.timings) {
        out << "time_" << t.stage << "_ms=" << t.ms << "\n";
      }
      out << "time_total_ms=" << total << "\n";
    };
  });

  // eval
  auto* ev = app.add_subcommand("eval", "Cut objectives and ARI of a labelling");
  std::string ev_matrix, ev_labels, ev_truth;
  ev->add_option("--matrix", ev_matrix, "Similarity matrix file")->required();
  ev->add_option("--labels", ev_labels, "Labels file")->required();
  ev->add_option("--truth", ev_truth, "Ground-truth labels file");
  ev->callback([&] {
    action = [&] {
      const auto w = in_stage("io", [&] { return coo_to_csr(io::load_sparse(ev_matrix)); });
      const auto raw = in_stage("io", [&] { return io::load_labels(ev_labels); });
      const auto labels = in_stage("metrics", [&] { return as_partition_labels(raw, "labels"); });
      in_stage("metrics", [&] {
        const auto p = Partition::from_labels(labels);
        out << "cut=" << io::format_double(cut(w, p)) << "\n";
        try {
          out << "ratio_cut=" << io::format_double(ratio_cut(w, p)) << "\n";
        } catch (const Error& e) {
          out << "ratio_cut=nan\n";
          err << "warning: ratio_cut: " << e.what() << "\n";
        }
        try {
          out << "ncut=" << io::format_double(ncut(w, p)) << "\n";
        } catch (const Error& e) {
          out << "ncut=nan\n";
          err << "warning: ncut: " << e.what() << "\n";
        }
      });
      if (!ev_truth.empty()) {
        const auto t = in_stage("io", [&] { return io::load_labels(ev_truth); });
        const auto truth = in_stage("metrics", [&] { return as_partition_labels(t, "truth"); });
        const double ari = in_stage("metrics", [&] { return adjusted_rand_index(labels, truth); });
        out << "ari=" << io::format_double(ari) << "\n";
      }
    };
  });

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const Error& e) {
    err << "error [config]: " << e.what() << "\n";
    return 2;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    set_num_threads(threads);
    action();
  } catch (const StageError& e) {
    std::string_view msg = e.what();
    if (msg.starts_with(e.stage() + ": ")) {
      msg.remove_prefix(e.stage().size() + 2);
    }
    err << "error [" << e.stage() << "]: " << to_string(e.code()) << ": " << msg << "\n";
    return 1;
  } catch (const StageFailure& e) {
    err << "error [" << e.stage() << "]: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace specclust::cli
