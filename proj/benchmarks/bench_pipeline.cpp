#include <specclust/pipeline.hpp>
#include <specclust/sbm.hpp>

#include <benchmark/benchmark.h>

namespace {

// Planted partition with p = 0.3, q = 0.01 and 100-node blocks; reports the
// per-stage split of the last iteration.
void BM_PipelineSbm(benchmark::State& state) {
  const auto blocks = static_cast<std::size_t>(state.range(0));
  specclust::SbmConfig s;
  s.block_sizes.assign(blocks, 100);
  s.seed = 5;
  const auto g = specclust::sbm_generate(s);
  specclust::PipelineConfig cfg;
  cfg.input = g.adjacency;
  cfg.k_clusters = blocks;
  cfg.isolated_policy = specclust::IsolatedPolicy::Remove;
  specclust::ClusterReport report;
  for (auto _ : state) {
    report = specclust::run(cfg);
    benchmark::DoNotOptimize(report.labels.data());
  }
  for (const auto& t : report.timings) {
    state.counters[t.stage + "_ms"] = t.ms;
  }
}
BENCHMARK(BM_PipelineSbm)->Arg(4)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

} // namespace
