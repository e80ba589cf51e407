#include <specclust/kmeans.hpp>
#include <specclust/rng.hpp>

#include <benchmark/benchmark.h>

namespace {

specclust::DenseMatrix blobs(std::size_t n, std::size_t d, std::size_t k) {
  specclust::Rng rng(4);
  specclust::DenseMatrix x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < d; ++l) {
      x(i, l) = 10.0 * static_cast<double>((i % k) == l % k) + rng.normal();
    }
  }
  return x;
}

void BM_PairwiseSqDist(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto v = blobs(n, 20, 20);
  const auto c = specclust::kmeanspp_init(v, 20, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(specclust::pairwise_sq_dist(v, c));
  }
}
BENCHMARK(BM_PairwiseSqDist)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_KmeansppSeeding(benchmark::State& state) {
  const auto v = blobs(2000, 20, 20);
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(specclust::kmeanspp_indices(v, 20, 1, trials));
  }
}
BENCHMARK(BM_KmeansppSeeding)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Kmeans(benchmark::State& state) {
  const auto v = blobs(static_cast<std::size_t>(state.range(0)), 20, 20);
  specclust::KmeansConfig cfg;
  cfg.k = 20;
  cfg.restarts = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(specclust::kmeans(v, cfg));
  }
}
BENCHMARK(BM_Kmeans)->Args({2000, 1})->Args({2000, 10})->Unit(benchmark::kMillisecond);

} // namespace
