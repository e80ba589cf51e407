#include <specclust/sbm.hpp>
#include <specclust/sparse.hpp>

#include <benchmark/benchmark.h>

namespace {

specclust::CsrMatrix sbm_matrix(std::size_t blocks) {
  specclust::SbmConfig cfg;
  cfg.block_sizes.assign(blocks, 100);
  cfg.seed = 1;
  return specclust::coo_to_csr(specclust::sbm_generate(cfg).adjacency);
}

void BM_Spmv(benchmark::State& state) {
  const auto a = sbm_matrix(static_cast<std::size_t>(state.range(0)));
  std::vector<double> x(a.n_cols, 1.0), y(a.n_rows);
  for (auto _ : state) {
    specclust::spmv(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * a.vals.size()));
}
BENCHMARK(BM_Spmv)->Arg(10)->Arg(50)->Arg(200);

void BM_CooToCsr(benchmark::State& state) {
  specclust::SbmConfig cfg;
  cfg.block_sizes.assign(static_cast<std::size_t>(state.range(0)), 100);
  const auto coo = specclust::sbm_generate(cfg).adjacency;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specclust::coo_to_csr(specclust::coo_canonicalize(coo)));
  }
}
BENCHMARK(BM_CooToCsr)->Arg(10)->Arg(50);

} // namespace
