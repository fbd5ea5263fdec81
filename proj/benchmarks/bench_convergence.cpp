#include "bldgraph/convergence.hpp"
#include "bldgraph/fixtures.hpp"

#include <benchmark/benchmark.h>

using namespace bldgraph;

namespace {

void BM_WindingDemo(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(winding_demo(static_cast<int>(state.range(0)), 4));
}
BENCHMARK(BM_WindingDemo)->Arg(3)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_CheckConvergence(benchmark::State& state) {
  const ConvergenceCertificate cert = winding_demo(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(check_package_convergence(cert));
}
BENCHMARK(BM_CheckConvergence)->Arg(3)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_QiSearch(benchmark::State& state) {
  const PointedSpace c4 = pointed(cycle_graph(4, 1));
  const Rational eps(1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(search_quasi_isometry(c4, c4, eps, eps / 8));
}
BENCHMARK(BM_QiSearch)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_MinQiEpsilon(benchmark::State& state) {
  const GraphMap id = identity_map(cycle_graph(4, 1));
  const PointedSpace s = pointed(id.source());
  const Rational eps(1, state.range(0));
  const auto w = make_witness(s, s, eps, eps / 4, [](const GraphPoint& p) { return p; });
  for (auto _ : state) benchmark::DoNotOptimize(min_qi_epsilon(w));
}
BENCHMARK(BM_MinQiEpsilon)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
