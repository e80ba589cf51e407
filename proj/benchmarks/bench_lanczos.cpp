#include <specclust/lanczos.hpp>
#include <specclust/laplacian.hpp>
#include <specclust/sbm.hpp>
#include <specclust/symmetric_eigen.hpp>

#include <benchmark/benchmark.h>

namespace {

// args: number of 100-node blocks, k
void BM_EigensolveSbm(benchmark::State& state) {
  specclust::SbmConfig cfg;
  cfg.block_sizes.assign(static_cast<std::size_t>(state.range(0)), 100);
  cfg.seed = 2;
  const auto w = specclust::coo_to_csr(specclust::sbm_generate(cfg).adjacency);
  const auto op = specclust::sym_scale(w, specclust::degrees(w));
  specclust::LanczosConfig lc;
  lc.k = static_cast<std::size_t>(state.range(1));
  std::size_t matvecs = 0;
  for (auto _ : state) {
    const auto basis = specclust::eigensolve(op, lc);
    matvecs = basis.matvecs;
    benchmark::DoNotOptimize(basis.values.data());
  }
  state.counters["matvecs"] = static_cast<double>(matvecs);
}
BENCHMARK(BM_EigensolveSbm)->Args({10, 10})->Args({20, 20})->Args({50, 50})
    ->Unit(benchmark::kMillisecond);

void BM_DenseSymmetricEigen(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  specclust::DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      a(i, j) = a(j, i) = 1.0 / static_cast<double>(1 + i + j);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(specclust::symmetric_eigen(a));
  }
}
BENCHMARK(BM_DenseSymmetricEigen)->Arg(40)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

} // namespace
