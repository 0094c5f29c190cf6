#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include <spdlog/spdlog.h>

#include "gsana/aligner.h"
#include "gsana/bench.h"

namespace gsana {
namespace {

const Scenario& scenario(VertexId n) {
  static std::map<VertexId, Scenario> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    SyntheticSpec spec;
    spec.vertices = n;
    PerturbationSpec noise;
    noise.remove_edges = 0.1;
    it = cache.emplace(n, make_scenario("bench", spec, noise, 40)).first;
  }
  return it->second;
}

void BM_Sigma(benchmark::State& state) {
  const auto& s = scenario(5000);
  const SimilarityContext sim(s.first, s.second);
  const AnchorIndex index(s.first, s.second, s.anchors.pairs);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<VertexId> pick(0, 4999);
  for (auto _ : state) benchmark::DoNotOptimize(sim.total(pick(rng), pick(rng), &index));
}
BENCHMARK(BM_Sigma);

void BM_Bfs(benchmark::State& state) {
  const auto& s = scenario(static_cast<VertexId>(state.range(0)));
  VertexId source = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bfs_distances(s.first, source));
    source = (source + 7919) % s.first.num_vertices();
  }
  state.SetItemsProcessed(state.iterations() * s.first.num_edges());
}
BENCHMARK(BM_Bfs)->Arg(5000)->Arg(50000);

void BM_QuadtreeBuild(benchmark::State& state) {
  const auto& s = scenario(static_cast<VertexId>(state.range(0)));
  DistanceTable d;
  const auto positions = embed_anchors(s.first, s.second, s.anchors.pairs, d, AlignerConfig{}).positions;
  for (auto _ : state) benchmark::DoNotOptimize(BucketTree::build(positions, 500));
  state.SetItemsProcessed(state.iterations() * positions.size());
}
BENCHMARK(BM_QuadtreeBuild)->Arg(5000)->Arg(50000);

void BM_Align(benchmark::State& state) {
  const auto& s = scenario(static_cast<VertexId>(state.range(0)));
  const SimilarityContext sim(s.first, s.second);
  AlignerConfig config;
  config.record_scopes = false;
  for (auto _ : state) benchmark::DoNotOptimize(align(sim, s.anchors, config).mapping.size());
}
BENCHMARK(BM_Align)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gsana
int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::err);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
