#include "bldgraph/checkers.hpp"
#include "bldgraph/fixtures.hpp"
#include "bldgraph/oracle.hpp"

#include <benchmark/benchmark.h>

using namespace bldgraph;

namespace {

// The largest of a few random covers whose source has at most max_source vertices.
GraphMap cover(int max_source) {
  std::mt19937 rng(7);
  RandomCoverOptions opt;
  opt.max_source_vertices = max_source;
  opt.max_target_vertices = std::max(2, max_source / 2);
  GraphMap best = random_branched_cover(rng, opt);
  for (int k = 0; k < 30; ++k) {
    GraphMap f = random_branched_cover(rng, opt);
    if (f.source().edge_count() > best.source().edge_count()) best = std::move(f);
  }
  return best;
}

void BM_Characterize(benchmark::State& state) {
  const GraphMap f = cover(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(characterize(f));
  state.counters["edges"] = static_cast<double>(f.source().edge_count());
}
BENCHMARK(BM_Characterize)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MinConstant(benchmark::State& state) {
  const GraphMap f = cover(8);
  const auto p = static_cast<Property>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(min_constant(f, p));
  state.SetLabel(std::string(property_name(p)));
}
BENCHMARK(BM_MinConstant)
    ->DenseRange(static_cast<int>(Property::BLD), static_cast<int>(Property::Lipschitz))
    ->Unit(benchmark::kMillisecond);

void BM_CheckLqWinding(benchmark::State& state) {
  const GraphMap f = winding_map(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(check_lq(f, 1));
}
BENCHMARK(BM_CheckLqWinding)->RangeMultiplier(2)->Range(2, 16)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const GraphMap f = winding_map(2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(DyadicOracle(f, state.range(0)));
}
BENCHMARK(BM_Oracle)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
