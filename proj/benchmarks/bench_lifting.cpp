#include "bldgraph/fixtures.hpp"
#include "bldgraph/lifting.hpp"

#include <benchmark/benchmark.h>

using namespace bldgraph;

namespace {

void BM_TotalLift(benchmark::State& state) {
  const GraphMap f = winding_map(3, 3);
  std::mt19937 rng(3);
  const GraphPoint x0 = GraphPoint::at_vertex(VertexId{0});
  const Walk beta = random_walk(rng, f.target(), f.eval(x0), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(total_lift(f, beta, x0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TotalLift)->RangeMultiplier(4)->Range(4, 256)->Complexity();

// Back and forth over the image of the fold point of TENT.
void BM_AllLiftsTent(benchmark::State& state) {
  const GraphMap f = tent_map();
  const MetricGraph& y = f.target();
  const EdgeId e = y.edge_by_name("e1");
  Walk beta{GraphPoint::at_vertex(VertexId{0}), {}};
  for (long k = 0; k < state.range(0); ++k) {
    beta.segments.push_back({e, 0, 1});
    beta.segments.push_back({e, 1, 0});
  }
  for (auto _ : state) benchmark::DoNotOptimize(all_maximal_lifts(f, beta));
}
BENCHMARK(BM_AllLiftsTent)->DenseRange(1, 8);

void BM_FiberTransport(benchmark::State& state) {
  const GraphMap f = winding_map(static_cast<int>(state.range(0)), 3);
  const MetricGraph& y = f.target();
  const GraphPoint x = y.point(y.edge_by_name("e1"), Rational(1, 3));
  const GraphPoint z = y.point(y.edge_by_name("e2"), Rational(2, 3));
  for (auto _ : state) benchmark::DoNotOptimize(fiber_transport(f, x, z, 1));
}
BENCHMARK(BM_FiberTransport)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace
