#include <benchmark/benchmark.h>

#include <vector>

#include "edhg/alias_table.hpp"
#include "edhg/datagen.hpp"
#include "edhg/embedding.hpp"
#include "edhg/graph.hpp"
#include "edhg/noise.hpp"
#include "edhg/predict.hpp"
#include "edhg/rng.hpp"
#include "edhg/train.hpp"

using namespace edhg;

namespace {

// Small planted campus shared by the graph-level benchmarks.
const HeteroGraph& campus() {
  static const HeteroGraph g = [] {
    GenConfig c;
    c.n_users = 1000;
    const auto pop = gen_population(c);
    return build_hetero(gen_checkins(c, pop).checkins);
  }();
  return g;
}

void BM_AliasDraw(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> w(static_cast<std::size_t>(state.range(0)));
  for (double& x : w) x = rng.uniform01() + 1e-3;
  const AliasTable t(w);
  for (auto _ : state) benchmark::DoNotOptimize(t.sample(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AliasDraw)->Arg(221)->Arg(100'000);

void BM_AliasBuild(benchmark::State& state) {
  Rng rng(2);
  std::vector<double> w(static_cast<std::size_t>(state.range(0)));
  for (double& x : w) x = rng.uniform01();
  for (auto _ : state) benchmark::DoNotOptimize(AliasTable(w));
}
BENCHMARK(BM_AliasBuild)->Arg(221)->Arg(100'000);

void BM_ConditionalNoiseTable(benchmark::State& state) {
  const auto& g = campus();
  const auto prior = category_prior(g);
  std::uint32_t j = 0;
  for (auto _ : state) {
    // Fresh model each batch so the per-target build is measured, not the cache.
    state.PauseTiming();
    auto noise = NoiseModel::conditional(g.poi_user, prior, context_categories(g.poi_user, g.poi_category));
    state.ResumeTiming();
    benchmark::DoNotOptimize(&noise.table_for(j));
    j = (j + 1) % static_cast<std::uint32_t>(g.poi_user.target_count());
  }
}
BENCHMARK(BM_ConditionalNoiseTable);

void BM_TrainStep(benchmark::State& state) {
  const auto& g = campus();
  const auto samplers = make_samplers(g, Variant::Edhg);
  EmbeddingStore store = init_embeddings(g.counts, static_cast<std::size_t>(state.range(0)), 3);
  Rng rng(4);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_bipartite(store, samplers[k], 10, 0.01, rng));
    k = (k + 1) % samplers.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrainStep)->Arg(32)->Arg(100);

void BM_TopK(benchmark::State& state) {
  const auto& g = campus();
  const EmbeddingStore store = init_embeddings(g.counts, 64, 5);
  std::uint32_t u = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(top_k_pois(store, u, 3, 10));
    u = (u + 1) % static_cast<std::uint32_t>(g.count(NodeKind::User));
  }
}
BENCHMARK(BM_TopK);

}  // namespace
BENCHMARK_MAIN();
