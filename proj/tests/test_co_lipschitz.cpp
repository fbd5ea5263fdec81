#include "doctest.h"

#include "bldgraph/co_lipschitz.hpp"
#include "bldgraph/fixtures.hpp"

#include <random>

using namespace bldgraph;

namespace {

// Brute-force maximum of rho / d over a dyadic grid of both graphs.
std::optional<Rational> grid_ratio(const GraphMap& f, int per_edge) {
  auto grid = [&](const MetricGraph& g) {
    std::vector<GraphPoint> pts;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) pts.push_back(GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(v)}));
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      for (int k = 1; k < per_edge; ++k)
        pts.push_back(g.point(EdgeId{static_cast<std::uint32_t>(e)}, g.edges()[e].length * Rational(k, per_edge)));
    return pts;
  };
  std::optional<Rational> best = Rational(0);
  for (const auto& x : grid(f.source()))
    for (const auto& z : grid(f.target())) {
      const Rational d = distance(f.target(), f.eval(x), z);
      if (d.is_zero()) continue;
      const auto rho = fiber_distance(f, x, z);
      if (!rho) return std::nullopt;
      if (*rho / d > *best) best = *rho / d;
    }
  return best;
}

}  // namespace

TEST_CASE("co-Lipschitz supremum on the fixture corpus") {
  CHECK(co_lipschitz_sup(identity_map(cycle_graph(3, 1))).value == Rational(1));
  CHECK(co_lipschitz_sup(tent_map()).value == Rational(1));
  CHECK(co_lipschitz_sup(speed2_map()).value == Rational(1, 2));
  CHECK(co_lipschitz_sup(winding_map(2, 3)).value == Rational(1));
  CHECK(co_lipschitz_sup(const_map()).value == Rational(0));

  const auto fold = co_lipschitz_sup(fold_map());
  CHECK_FALSE(fold.value.has_value());
  const auto w = co_lipschitz_witness(fold_map(), 1000);
  REQUIRE(w.has_value());
  CHECK_FALSE(w->rho.has_value());
}

TEST_CASE("fiber distance") {
  const GraphMap t = tent_map();
  const auto& x = t.source();
  const auto& y = t.target();
  const GraphPoint z = y.point(EdgeId{0}, Rational(1, 4));
  CHECK(*fiber_distance(t, GraphPoint::at_vertex(x.vertex_by_name("v1")), z) == Rational(3, 4));
  CHECK(*fiber_distance(t, GraphPoint::at_vertex(x.vertex_by_name("v2")), z) == Rational(1, 4));
  const GraphMap c = const_map();
  CHECK(*fiber_distance(c, x.point(EdgeId{0}, Rational(1, 2)), GraphPoint::at_vertex(VertexId{0})) == 0);
}

TEST_CASE("supremum dominates grid ratios and is approached by witnesses") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    const GraphMap f = random_branched_cover(rng, {3, 2, 6, 4});
    const auto sup = co_lipschitz_sup(f);
    const auto grid = grid_ratio(f, 8);
    if (!sup.value) {
      CHECK(co_lipschitz_witness(f, 1000000).has_value());
      continue;
    }
    REQUIRE(grid.has_value());
    CHECK(*grid <= *sup.value);
    CHECK_FALSE(co_lipschitz_witness(f, *sup.value).has_value());
    if (sup.value->sign() > 0) {
      const auto w = co_lipschitz_witness(f, *sup.value * Rational(99, 100));
      REQUIRE(w.has_value());
      CHECK(*w->rho > *sup.value * Rational(99, 100) * w->dist);
    }
  }
}
