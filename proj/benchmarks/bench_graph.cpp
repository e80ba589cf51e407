#include <specclust/graph.hpp>
#include <specclust/rng.hpp>

#include <benchmark/benchmark.h>

namespace {

specclust::PointMatrix cloud(std::size_t n, std::size_t d) {
  specclust::Rng rng(3);
  specclust::PointMatrix x(n, d);
  for (auto& v : x.data) {
    v = rng.normal();
  }
  return x;
}

void BM_KnnEdges(benchmark::State& state) {
  const auto x = cloud(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        specclust::build_edges_knn(x, 10, specclust::SimilarityMeasure::cross_correlation()));
  }
}
BENCHMARK(BM_KnnEdges)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_EpsEdges(benchmark::State& state) {
  const auto x = cloud(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(specclust::build_edges_eps(x, 0.5));
  }
}
BENCHMARK(BM_EpsEdges)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_BuildSimilarity(benchmark::State& state) {
  const auto x = cloud(static_cast<std::size_t>(state.range(0)), 8);
  const auto edges = specclust::build_edges_knn(x, 10, specclust::SimilarityMeasure::cosine());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        specclust::build_similarity(x, edges, specclust::SimilarityMeasure::cosine()));
  }
}
BENCHMARK(BM_BuildSimilarity)->Arg(2000)->Unit(benchmark::kMillisecond);

} // namespace
