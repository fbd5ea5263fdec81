#include "doctest.h"

#include "bldgraph/fixtures.hpp"
#include "bldgraph/metric_graph.hpp"

#include <random>

using namespace bldgraph;

namespace {

GraphPoint vtx(const MetricGraph& g, const std::string& name) { return GraphPoint::at_vertex(g.vertex_by_name(name)); }
GraphPoint at(const MetricGraph& g, const std::string& edge, const Rational& off) {
  return g.point(g.edge_by_name(edge), off);
}

// Every point at a vertex or at a dyadic offset of an edge.
std::vector<GraphPoint> grid(const MetricGraph& g, long steps) {
  std::vector<GraphPoint> out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) out.push_back(GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(v)}));
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (long k = 1; k < steps; ++k)
      out.push_back(g.point(EdgeId{static_cast<std::uint32_t>(e)}, g.edges()[e].length * Rational(k, steps)));
  return out;
}

}  // namespace

TEST_CASE("build_graph validates its input") {
  const MetricGraph c3 = cycle_graph(3, 1);
  Rational diam = 0;
  for (const auto& p : grid(c3, 8))
    for (const auto& q : grid(c3, 8)) diam = max(diam, distance(c3, p, q));
  CHECK(diam == Rational(3, 2));

  GraphSpec one{{"p"}, {}, std::nullopt};
  const MetricGraph pt = build_graph(one);
  CHECK(pt.vertex_count() == 1);
  CHECK(critical_radii(pt, vtx(pt, "p")).empty());
  CHECK(ball(pt, vtx(pt, "p"), 5).has_vertex(VertexId{0}));

  GraphSpec zero{{"a", "b"}, {{"e", "a", "b", 0}}, std::nullopt};
  CHECK_THROWS_AS(build_graph(zero), GraphError);
  GraphSpec disconnected{{"a", "b", "c"}, {{"e", "a", "b", 1}}, std::nullopt};
  CHECK_THROWS_AS(build_graph(disconnected), GraphError);
  GraphSpec dup{{"a", "a"}, {}, std::nullopt};
  CHECK_THROWS_AS(build_graph(dup), GraphError);
  GraphSpec dup_edge{{"a", "b"}, {{"e", "a", "b", 1}, {"e", "b", "a", 1}}, std::nullopt};
  CHECK_THROWS_AS(build_graph(dup_edge), GraphError);
}

TEST_CASE("points canonicalize to vertices at edge ends") {
  const MetricGraph i2 = path_graph(2);
  CHECK(at(i2, "e1", 0) == vtx(i2, "v0"));
  CHECK(at(i2, "e1", 1) == vtx(i2, "v1"));
  CHECK_FALSE(at(i2, "e1", Rational(1, 2)).is_vertex());
  CHECK_THROWS_AS(at(i2, "e1", 2), GraphError);
}

TEST_CASE("distances on small fixtures") {
  const MetricGraph c3 = cycle_graph(3, 1);
  CHECK(distance(c3, vtx(c3, "v0"), vtx(c3, "v1")) == 1);
  // Vertex v0 and the midpoint of the opposite edge v1-v2.
  CHECK(distance(c3, vtx(c3, "v0"), at(c3, "e2", Rational(1, 2))) == Rational(3, 2));
  const GraphPoint p = at(c3, "e1", Rational(1, 3));
  CHECK(distance(c3, p, p) == 0);
  CHECK(distance(c3, p, at(c3, "e1", Rational(3, 4))) == Rational(5, 12));
}

TEST_CASE("geodesics realize the distance and break ties by edge order") {
  const MetricGraph i2 = path_graph(2);
  Walk w = geodesic(i2, vtx(i2, "v0"), vtx(i2, "v2"));
  CHECK(w.segments.size() == 2);
  CHECK(walk_length(i2, w) == 2);

  const MetricGraph c4 = cycle_graph(4, 1);
  w = geodesic(c4, vtx(c4, "v0"), vtx(c4, "v2"));
  CHECK(walk_length(c4, w) == 2);
  REQUIRE(w.segments.size() == 2);
  CHECK(w.segments[0].edge == c4.edge_by_name("e1"));

  w = geodesic(c4, vtx(c4, "v1"), vtx(c4, "v1"));
  CHECK(w.empty());
  CHECK(walk_length(c4, w) == 0);

  std::mt19937 rng(7);
  const MetricGraph c5 = cycle_graph(5, Rational(2, 3));
  auto pts = grid(c5, 6);
  for (int i = 0; i < 200; ++i) {
    const auto& a = pts[rng() % pts.size()];
    const auto& b = pts[rng() % pts.size()];
    CHECK(walk_length(c5, geodesic(c5, a, b)) == distance(c5, a, b));
  }
}

TEST_CASE("walk length is additive") {
  const MetricGraph g = build_graph({{"a", "b"}, {{"e", "a", "b", Rational(3, 2)}}, std::nullopt});
  const EdgeId e = g.edge_by_name("e");
  Walk w{vtx(g, "a"), {{e, 0, Rational(3, 2)}, {e, Rational(3, 2), 0}}};
  CHECK(walk_length(g, w) == 3);
  Walk bad{vtx(g, "a"), {{e, 0, 1}, {e, Rational(3, 2), 0}}};
  CHECK_THROWS_AS(walk_length(g, bad), GraphError);
}

TEST_CASE("balls and spheres") {
  const MetricGraph i2 = path_graph(2);
  const Region b = ball(i2, vtx(i2, "v1"), Rational(1, 2));
  CHECK(b.on_edge(i2.edge_by_name("e1")).str() == "(1/2, 1)");
  CHECK(b.on_edge(i2.edge_by_name("e2")).str() == "(0, 1/2)");
  CHECK(b.has_vertex(i2.vertex_by_name("v1")));
  CHECK(b.is_open(i2));
  CHECK_THROWS_AS(ball(i2, vtx(i2, "v1"), 0), GraphError);

  const MetricGraph c3 = cycle_graph(3, 1);
  CHECK(ball(c3, vtx(c3, "v0"), Rational(3, 2), BallKind::Closed) == Region::whole(c3));
  CHECK(ball(c3, vtx(c3, "v0"), Rational(3, 2)) != Region::whole(c3));

  auto s = sphere(i2, vtx(i2, "v0"), Rational(1, 2));
  REQUIRE(s.size() == 1);
  CHECK(s[0] == at(i2, "e1", Rational(1, 2)));
  const MetricGraph c4 = cycle_graph(4, 1);
  CHECK(sphere(c4, vtx(c4, "v0"), Rational(1, 2)).size() == 2);
  CHECK(sphere(c4, vtx(c4, "v0"), 2).size() == 1);
  CHECK(sphere(c4, vtx(c4, "v0"), 3).empty());

  // Monotonicity in the radius.
  for (long k = 1; k < 12; ++k)
    CHECK(ball(c4, at(c4, "e2", Rational(1, 3)), Rational(k, 4)).is_subset_of(ball(c4, at(c4, "e2", Rational(1, 3)), Rational(k + 1, 4))));
}

TEST_CASE("critical radii") {
  const MetricGraph i2 = path_graph(2);
  CHECK(critical_radii(i2, vtx(i2, "v1")) == std::vector<Rational>{1});
  const MetricGraph c3 = cycle_graph(3, 1);
  CHECK(critical_radii(c3, vtx(c3, "v0")) == std::vector<Rational>{1, Rational(3, 2)});
  // Interior center: three vertex distances and the antipodal point.
  const GraphPoint x = at(c3, "e1", Rational(1, 4));
  const auto radii = critical_radii(c3, x);
  CHECK(radii == std::vector<Rational>{Rational(1, 4), Rational(3, 4), Rational(5, 4), Rational(3, 2)});
}

TEST_CASE("sphere points move affinely between critical radii (dyadic scan)") {
  const MetricGraph c3 = cycle_graph(3, 1);
  const MetricGraph g = build_graph({{"a", "b", "c"},
                                     {{"x", "a", "b", 1}, {"y", "b", "c", Rational(1, 2)}, {"z", "c", "a", Rational(3, 4)},
                                      {"w", "b", "b", Rational(1, 3)}},
                                     std::nullopt});
  for (const MetricGraph* gp : {&c3, &g}) {
    const MetricGraph& G = *gp;
    for (const auto& x : grid(G, 4)) {
      auto radii = critical_radii(G, x);
      radii.insert(radii.begin(), Rational(0));
      for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
        // Three radii inside one regime: equal counts, and the middle sphere
        // is the affine interpolation of the outer two (by a fine grid scan).
        const Rational lo = radii[k], hi = radii[k + 1];
        const Rational r1 = lo + (hi - lo) / 4, r2 = lo + (hi - lo) / 2, r3 = lo + 3 * (hi - lo) / 4;
        const auto s1 = sphere(G, x, r1), s2 = sphere(G, x, r2), s3 = sphere(G, x, r3);
        CHECK(s1.size() == s2.size());
        CHECK(s2.size() == s3.size());
        REQUIRE(s1.size() == s3.size());
        for (std::size_t i = 0; i < s2.size(); ++i) {
          const Rational o1 = s1[i].is_vertex() ? Rational(-1) : s1[i].offset();
          const Rational o2 = s2[i].is_vertex() ? Rational(-1) : s2[i].offset();
          const Rational o3 = s3[i].is_vertex() ? Rational(-1) : s3[i].offset();
          CHECK(s1[i].edge() == s2[i].edge());
          CHECK(o2 == (o1 + o3) / 2);
        }
        // Brute force: every grid point at distance r2 is a sphere point.
        const Rational step = G.min_edge_length() / 64;
        for (std::size_t e = 0; e < G.edge_count(); ++e)
          for (Rational t = step; t < G.edges()[e].length; t += step) {
            const GraphPoint p = G.point(EdgeId{static_cast<std::uint32_t>(e)}, t);
            if (distance(G, x, p) == r2) CHECK(std::binary_search(s2.begin(), s2.end(), p));
          }
      }
    }
  }
}

TEST_CASE("components and boundary") {
  const MetricGraph i2 = path_graph(2);
  Region a(i2);
  a.add_edge_interval(i2, i2.edge_by_name("e1"), Rational(1, 4), Rational(1, 2), true, true);
  a.add_edge_interval(i2, i2.edge_by_name("e2"), Rational(1, 4), Rational(1, 2), true, true);
  CHECK(components(i2, a).size() == 2);

  const MetricGraph c4 = cycle_graph(4, 1);
  CHECK(components(c4, Region::whole(c4)).size() == 1);
  CHECK(boundary(c4, Region::whole(c4)).empty());

  // Closed ball minus its center is connected through nothing: two pieces.
  const GraphPoint m = vtx(i2, "v1");
  Region punctured = ball(i2, m, Rational(1, 2), BallKind::Closed).subtract(i2, Region::of_points(i2, {m}));
  CHECK(components(i2, punctured).size() == 2);
  // Two closed intervals touching at the center vertex form one component.
  Region joined(i2);
  joined.add_edge_interval(i2, i2.edge_by_name("e1"), Rational(1, 2), 1, true, true);
  joined.add_edge_interval(i2, i2.edge_by_name("e2"), 0, Rational(1, 2), true, true);
  CHECK(components(i2, joined).size() == 1);

  Region half(i2);
  half.add_edge_interval(i2, i2.edge_by_name("e1"), 0, Rational(1, 2), true, true);
  auto bd = boundary(i2, half);
  REQUIRE(bd.size() == 1);
  CHECK(bd[0] == at(i2, "e1", Rational(1, 2)));

  const GraphPoint p = at(i2, "e2", Rational(1, 3));
  CHECK(boundary(i2, Region::of_points(i2, {p})) == std::vector<GraphPoint>{p});
}

TEST_CASE("subdivision is an isometry") {
  const MetricGraph i1 = path_graph(1);
  const auto s1 = subdivide(i1, Rational(1, 2));
  CHECK(s1.graph.edge_count() == 2);
  CHECK(s1.graph.edges()[0].length == Rational(1, 2));

  const MetricGraph c3 = cycle_graph(3, 1);
  const auto s = subdivide(c3, Rational(1, 3));
  CHECK(s.graph.edge_count() == 9);
  CHECK(s.graph.vertex_count() == 9);
  for (std::size_t a = 0; a < 9; ++a)
    for (std::size_t b = 0; b < 9; ++b) {
      const GraphPoint pa = GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(a)});
      const GraphPoint pb = GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(b)});
      CHECK(distance(s.graph, pa, pb) == distance(c3, s.to_original(c3, pa), s.to_original(c3, pb)));
    }
  for (const auto& p : grid(c3, 6)) CHECK(s.to_original(c3, s.to_refined(c3, p)) == p);

  const auto same = subdivide(c3, 2);
  CHECK(same.graph.edge_count() == 3);
  CHECK_THROWS_AS(subdivide(c3, 0), GraphError);
}
