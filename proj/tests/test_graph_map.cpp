#include "doctest.h"

#include "bldgraph/fixtures.hpp"
#include "bldgraph/graph_map.hpp"

#include <random>

using namespace bldgraph;

namespace {

GraphPoint vtx(const MetricGraph& g, const std::string& name) { return GraphPoint::at_vertex(g.vertex_by_name(name)); }
GraphPoint at(const MetricGraph& g, const std::string& edge, const Rational& off) {
  return g.point(g.edge_by_name(edge), off);
}

}  // namespace

TEST_CASE("map construction enforces continuity") {
  const GraphMap w2 = winding_map(2, 3);
  for (std::size_t e = 0; e < w2.source().edge_count(); ++e) CHECK(w2.speed(EdgeId{static_cast<std::uint32_t>(e)}) == 1);
  const GraphMap id = identity_map(cycle_graph(4, 1));
  CHECK(id.max_speed() == 1);

  MapSpec bad{{{"v0", "v0"}, {"v1", "v1"}, {"v2", "v0"}}, {{"e1", {{"e1", false}}}, {"e2", {{"e1", false}}}}};
  CHECK_THROWS_AS(build_map(path_graph(2), path_graph(1), bad), GraphError);
  MapSpec unknown{{{"v0", "v0"}, {"v1", "zz"}}, {{"e1", {{"e1", true}}}}};
  CHECK_THROWS_AS(build_map(path_graph(1), path_graph(1), unknown), GraphError);
}

TEST_CASE("evaluation and image walks") {
  const GraphMap s2 = speed2_map();
  CHECK(s2.eval(at(s2.source(), "e1", Rational(1, 2))) == vtx(s2.target(), "v1"));
  CHECK(s2.eval(at(s2.source(), "e1", Rational(1, 4))) == at(s2.target(), "e1", Rational(1, 2)));
  const GraphMap c = const_map();
  CHECK(c.eval(at(c.source(), "e2", Rational(1, 3))) == vtx(c.target(), "p"));

  const GraphMap w2 = winding_map(2, 3);
  const Walk w = geodesic(w2.source(), vtx(w2.source(), "v0"), vtx(w2.source(), "v3"));
  CHECK(walk_length(w2.target(), image_walk(w2, w)) == 3);

  const GraphMap tent = tent_map();
  const Walk amb = geodesic(tent.source(), vtx(tent.source(), "v0"), vtx(tent.source(), "v2"));
  const Walk img = image_walk(tent, amb);
  CHECK(walk_length(tent.target(), img) == 2);
  CHECK(walk_end(tent.target(), img) == vtx(tent.target(), "v0"));

  const Walk still{at(tent.source(), "e1", Rational(1, 3)), {}};
  CHECK(image_walk(tent, still).empty());
}

TEST_CASE("image walk lengths are additive over edge speeds") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const GraphMap f = random_branched_cover(rng);
    const MetricGraph& x = f.source();
    // Random walk of whole and partial edge traversals.
    GraphPoint cur = GraphPoint::at_vertex(VertexId{0});
    Walk w{cur, {}};
    Rational expected = 0;
    for (int step = 0; step < 6; ++step) {
      const auto dirs = x.directions_at(cur);
      if (dirs.empty()) break;
      const Direction d = dirs[rng() % dirs.size()];
      const Edge& ed = x.edge(d.edge);
      const Rational from = x.offset_on(d.edge, cur, !d.forward);
      const Rational to = d.forward ? ed.length : Rational(0);
      w.segments.push_back({d.edge, from, to});
      expected += f.speed(d.edge) * abs(to - from);
      cur = x.point(d.edge, to);
    }
    CHECK(walk_length(f.target(), image_walk(f, w)) == expected);
  }
}

TEST_CASE("discreteness, openness and branched covers") {
  CHECK(is_discrete(winding_map(2, 3)).holds);
  CHECK(is_discrete(tent_map()).holds);
  const auto cd = is_discrete(const_map());
  CHECK_FALSE(cd.holds);
  CHECK(cd.edge.has_value());

  const GraphMap fold = fold_map();
  const auto open = is_open(fold);
  CHECK_FALSE(open.holds);
  REQUIRE(open.point.has_value());
  CHECK(*open.point == vtx(fold.source(), "v1"));
  CHECK(is_open(tent_map()).holds);
  CHECK(is_open(identity_map(path_graph(3))).holds);

  CHECK(is_branched_cover(winding_map(3, 3)));
  CHECK_FALSE(is_branched_cover(fold));
  CHECK_FALSE(is_branched_cover(const_map()));
  // Onto a point every image is the whole space, hence open.
  CHECK(is_open(const_map()).holds);

  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) CHECK(is_branched_cover(random_branched_cover(rng)));
}

TEST_CASE("branch set") {
  CHECK(branch_set(identity_map(cycle_graph(3, 1))).empty());
  const GraphMap tent = tent_map();
  CHECK(branch_set(tent) == std::vector<GraphPoint>{vtx(tent.source(), "v1")});
  CHECK(branch_set(winding_map(2, 3)).empty());
  CHECK_THROWS_AS(branch_set(fold_map()), PreconditionError);
}

TEST_CASE("fibers and multiplicity") {
  const GraphMap w2 = winding_map(2, 3);
  CHECK(fiber(w2, vtx(w2.target(), "v1")).points.size() == 2);
  CHECK(fiber(w2, at(w2.target(), "e3", Rational(1, 5))).points.size() == 2);

  const GraphMap tent = tent_map();
  const Region all = Region::whole(tent.source());
  CHECK(multiplicity(tent, at(tent.target(), "e1", Rational(1, 3)), all) == 2u);
  CHECK(multiplicity(tent, vtx(tent.target(), "v1"), all) == 1u);
  CHECK(max_multiplicity(tent, all) == 2u);

  const GraphMap id = identity_map(path_graph(2));
  CHECK(max_multiplicity(id, Region::whole(id.source())) == 1u);

  const GraphMap c = const_map();
  const Fiber cf = fiber(c, vtx(c.target(), "p"));
  CHECK_FALSE(cf.discrete);
  CHECK(cf.region == Region::whole(c.source()));
  CHECK_FALSE(max_multiplicity(c, Region::whole(c.source())).has_value());
}

TEST_CASE("preimages") {
  const GraphMap id = identity_map(cycle_graph(3, 1));
  const Region b = ball(id.target(), at(id.target(), "e1", Rational(1, 3)), Rational(2, 3));
  CHECK(preimage_region(id, b) == b);

  const GraphMap s2 = speed2_map();
  const Region pre = preimage_region(s2, ball(s2.target(), vtx(s2.target(), "v1"), Rational(1, 2)));
  CHECK(pre.on_edge(s2.source().edge_by_name("e1")).str() == "(1/4, 3/4)");

  const GraphMap c = const_map();
  CHECK(preimage_region(c, Region::whole(c.target())) == Region::whole(c.source()));

  // Images and preimages agree with pointwise evaluation on a dyadic grid.
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const GraphMap f = random_branched_cover(rng);
    const MetricGraph& y = f.target();
    const GraphPoint c0 = GraphPoint::at_vertex(VertexId{0});
    const Region by = ball(y, c0, Rational(1, 2));
    const Region px = preimage_region(f, by);
    const Rational step = f.source().min_edge_length() / 16;
    for (std::size_t e = 0; e < f.source().edge_count(); ++e)
      for (Rational t = step; t < f.source().edges()[e].length; t += step) {
        const GraphPoint p = f.source().point(EdgeId{static_cast<std::uint32_t>(e)}, t);
        CHECK(px.contains(p) == by.contains(f.eval(p)));
      }
  }
}

TEST_CASE("components U(x, f, r)") {
  const GraphMap tent = tent_map();
  const Region u = u_component(tent, vtx(tent.source(), "v1"), Rational(1, 2));
  CHECK(u == ball(tent.source(), vtx(tent.source(), "v1"), Rational(1, 2)));

  const GraphMap id = identity_map(cycle_graph(4, 1));
  const GraphPoint x = at(id.source(), "e2", Rational(1, 3));
  CHECK(u_component(id, x, Rational(3, 2)) == ball(id.source(), x, Rational(3, 2)));

  const GraphMap w2 = winding_map(2, 3);
  const GraphPoint v0 = vtx(w2.source(), "v0");
  CHECK(u_component(w2, v0, Rational(1, 2)) == ball(w2.source(), v0, Rational(1, 2)));

  // U(x,f,r) = U(x,f,r0) ∩ f^{-1}(B(f(x), r)) for r < r0.
  const Rational r0 = max_normal_radius(w2, v0);
  for (long k = 1; k < 8; ++k) {
    const Rational r = r0 * Rational(k, 8);
    const Region lhs = u_component(w2, v0, r);
    const Region rhs = u_component(w2, v0, r0).intersect(preimage_region(w2, ball(w2.target(), w2.eval(v0), r)));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("normal domains and neighbourhoods") {
  const GraphMap tent = tent_map();
  const GraphPoint m = vtx(tent.source(), "v1");
  const Region u = u_component(tent, m, Rational(1, 2));
  CHECK(is_normal_neighbourhood(tent, u, m));

  const GraphMap id = identity_map(cycle_graph(3, 1));
  const Region b = ball(id.source(), vtx(id.source(), "v0"), Rational(2, 3));
  CHECK(is_normal_domain(id, b));

  const GraphMap w2 = winding_map(2, 3);
  const Region all = Region::whole(w2.source());
  CHECK(is_normal_domain(w2, all));
  CHECK_FALSE(is_normal_neighbourhood(w2, all, vtx(w2.source(), "v0")));

  Region not_open(tent.source());
  not_open.add_edge_interval(tent.source(), tent.source().edge_by_name("e1"), 0, Rational(1, 2), true, true);
  CHECK_THROWS_AS(is_normal_domain(tent, not_open), PreconditionError);
}

TEST_CASE("maximal normal radius") {
  const GraphMap id = identity_map(cycle_graph(3, 1));
  CHECK(max_normal_radius(id, vtx(id.source(), "v0")) == Rational(3, 2));
  const GraphMap w2 = winding_map(2, 3);
  CHECK(max_normal_radius(w2, vtx(w2.source(), "v0")) == Rational(3, 2));
  const GraphMap tent = tent_map();
  CHECK(max_normal_radius(tent, vtx(tent.source(), "v1")) == 1);
  CHECK_THROWS_AS(max_normal_radius(fold_map(), vtx(fold_map().source(), "v1")), PreconditionError);
}

TEST_CASE("normal decomposition over a normal domain") {
  const GraphMap w2 = winding_map(2, 3);
  const Region all = Region::whole(w2.source());
  const auto d = normal_decomposition(w2, all, vtx(w2.target(), "v0"));
  CHECK(d.radius_bound == Rational(3, 2));
  CHECK(d.parts.size() == 2);
  CHECK(d.disjoint);
  CHECK(d.union_matches);
  CHECK(d.all_normal);

  const GraphMap id = identity_map(path_graph(2));
  const auto di = normal_decomposition(id, Region::whole(id.source()), vtx(id.target(), "v1"));
  CHECK(di.parts.size() == 1);
  CHECK(di.union_matches);

  const GraphMap tent = tent_map();
  const auto dt = normal_decomposition(tent, Region::whole(tent.source()), at(tent.target(), "e1", Rational(1, 2)));
  CHECK(dt.parts.size() == 2);
  CHECK(dt.disjoint);
  CHECK(dt.union_matches);
}

TEST_CASE("preimages of connected sets in normal neighbourhoods are connected") {
  const GraphMap tent = tent_map();
  const GraphPoint m = vtx(tent.source(), "v1");
  const Region u = u_component(tent, m, Rational(1, 2));
  CHECK(connected_preimage_check(tent, m, u, ball(tent.target(), tent.eval(m), Rational(1, 4))));

  const GraphMap id = identity_map(cycle_graph(3, 1));
  const GraphPoint x = vtx(id.source(), "v0");
  CHECK(connected_preimage_check(id, x, u_component(id, x, 1), ball(id.target(), x, Rational(1, 2))));

  const GraphMap w2 = winding_map(2, 3);
  const GraphPoint v = vtx(w2.source(), "v0");
  CHECK(connected_preimage_check(w2, v, u_component(w2, v, 1), ball(w2.target(), w2.eval(v), Rational(3, 4))));
}
