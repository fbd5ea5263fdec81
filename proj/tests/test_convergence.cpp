#include "doctest.h"

#include "bldgraph/convergence.hpp"
#include "bldgraph/fixtures.hpp"

using namespace bldgraph;

namespace {

PointedSpace at_v0(const MetricGraph& g) { return PointedSpace{g, GraphPoint::at_vertex(VertexId{0})}; }
GraphPoint to_point(const GraphPoint&) { return GraphPoint::at_vertex(VertexId{0}); }
GraphPoint same(const GraphPoint& p) { return p; }

}  // namespace

TEST_CASE("nets cover the ball") {
  const PointedSpace c = at_v0(cycle_graph(3, 1));
  const auto net = ball_net(c, 1, Rational(1, 4));
  CHECK(net.front() == c.base);
  // d < 1 from v0 on C_3(1): the two incident edges minus their far ends.
  CHECK(net.size() == 7);
  CHECK(ball_net(c, 100, Rational(1, 4)).size() == 12);
}

TEST_CASE("quasi-isometry checks") {
  const PointedSpace c = at_v0(cycle_graph(4, 1));
  for (const Rational eps : {Rational(1, 8), Rational(1, 2), Rational(2)})
    CHECK(check_quasi_isometry(make_witness(c, c, eps, eps / 4, same)).passes);

  const PointedSpace tri = at_v0(cycle_graph(3, Rational(1, 3)));
  const PointedSpace pt = at_v0(point_graph());
  const auto ok = check_quasi_isometry(make_witness(tri, pt, Rational(3, 4), Rational(3, 32), to_point));
  CHECK(ok.passes);
  CHECK(ok.max_distortion == Rational(1, 2));
  const auto bad = check_quasi_isometry(make_witness(tri, pt, Rational(1, 4), Rational(1, 32), to_point));
  CHECK_FALSE(bad.passes);
  CHECK(bad.violated == "distortion");
  // The net has no exact antipode, so the worst pair sits one mesh step short.
  CHECK(distance(tri.graph, bad.pair->first, bad.pair->second) == Rational(16, 33));
  CHECK(bad.max_distortion + Rational(2, 32) >= Rational(1, 4));

  CHECK_THROWS_AS(check_quasi_isometry(make_witness(c, c, Rational(1, 2), Rational(1, 4), same)), PreconditionError);
  auto moved = make_witness(c, c, Rational(1, 2), Rational(1, 8), same);
  moved.image[0] = GraphPoint::at_vertex(VertexId{1});
  CHECK(check_quasi_isometry(moved).violated == "basepoint");
  auto sparse = make_witness(c, c, Rational(1, 2), Rational(1, 8), same);
  sparse.net.pop_back();
  sparse.image.pop_back();
  CHECK_THROWS_AS(check_quasi_isometry(sparse), PreconditionError);

  // Monotone in ε for a fixed net.
  const auto w = make_witness(tri, pt, Rational(3, 4), Rational(3, 32), to_point);
  for (const Rational e : {Rational(3, 4), Rational(1), Rational(2)}) {
    auto we = w;
    we.epsilon = e;
    CHECK(check_quasi_isometry(we).passes);
  }
}

TEST_CASE("minimal quasi-isometry tolerance") {
  const PointedSpace tri = at_v0(cycle_graph(3, Rational(1, 3)));
  const PointedSpace pt = at_v0(point_graph());
  const QiEpsilon e = min_qi_epsilon(make_witness(tri, pt, Rational(3, 4), Rational(1, 96), to_point));
  CHECK(e.value == Rational(1, 2) + Rational(2, 96));
  CHECK_FALSE(e.attained);

  // The identity is limited by the net scale once the net spans the space.
  const PointedSpace c = at_v0(cycle_graph(4, 1));
  const QiEpsilon id = min_qi_epsilon(make_witness(c, c, Rational(1, 4), Rational(1, 16), same));
  CHECK(id.value == Rational(1, 4));
  CHECK(id.attained);
  // A net built for ε = 1/2 misses the antipode, so nothing smaller verifies.
  const QiEpsilon half = min_qi_epsilon(make_witness(c, c, Rational(1, 2), Rational(1, 16), same));
  CHECK(half.value == Rational(1, 2));
  CHECK(id.value == Rational(1, 4));
  CHECK(id.attained);

  // Winding C_6(1) -> C_3(1): the antipodal pair at distance 3 lands at distance 0.
  const GraphMap w2 = winding_map(2, 3);
  const QiEpsilon we = min_qi_epsilon(make_witness(at_v0(w2.source()), at_v0(w2.target()), Rational(1, 4),
                                                   Rational(1, 16), [&](const GraphPoint& p) { return w2.eval(p); }));
  CHECK(we.value >= Rational(7, 8));
}

TEST_CASE("quasi-isometry search") {
  const PointedSpace c = at_v0(cycle_graph(3, 1));
  const auto found = search_quasi_isometry(c, c, Rational(1, 8), Rational(1, 64));
  REQUIRE(found.witness.has_value());
  CHECK(check_quasi_isometry(*found.witness).passes);

  const PointedSpace tri = at_v0(cycle_graph(3, Rational(1, 3)));
  const auto collapse = search_quasi_isometry(tri, at_v0(point_graph()), Rational(3, 4), Rational(3, 32));
  REQUIRE(collapse.witness.has_value());
  CHECK(collapse.witness->net.size() <= 13);

  const auto none = search_quasi_isometry(at_v0(path_graph(1)), at_v0(cycle_graph(8, 1)), Rational(1, 4), Rational(1, 32));
  CHECK_FALSE(none.witness.has_value());
  CHECK(none.unreachable);

  CHECK_THROWS_AS(search_quasi_isometry(c, c, Rational(1, 8), Rational(1, 64), 10), BudgetError);
}

TEST_CASE("package convergence") {
  const GraphMap w2 = winding_map(2, 3);
  const ConvergenceCertificate cw = constant_sequence(make_package(w2, GraphPoint::at_vertex(VertexId{0})), 3);
  const ConvergenceReport r = check_package_convergence(cw);
  CHECK(r.converges);
  CHECK(r.epsilons_nonincreasing);
  const LimitReport b = bld_limit_harness(cw, 1);
  CHECK(b.applicable);
  CHECK(b.limit_passes);
  CHECK(lq_limit_harness(cw, 1).limit_passes);

  const ConvergenceCertificate cs = constant_sequence(make_package(speed2_map(), GraphPoint::at_vertex(VertexId{0})), 2);
  CHECK(lq_limit_harness(cs, 2).limit_passes);
  CHECK_THROWS_AS(lq_limit_harness(cs, 1), PreconditionError);

  ConvergenceCertificate broken = cw;
  broken.maps[1].h.image[0] = GraphPoint::at_vertex(VertexId{1});
  const ConvergenceReport rb = check_package_convergence(broken);
  CHECK_FALSE(rb.converges);
  CHECK(rb.failures.front().find("basepoint") != std::string::npos);

  ConvergenceCertificate gap = cw;
  gap.maps.pop_back();
  CHECK_THROWS_AS(check_package_convergence(gap), PreconditionError);
}

TEST_CASE("winding demo") {
  const ConvergenceCertificate c = winding_demo(3, 4);
  REQUIRE(c.packages.size() == 3);
  for (const auto& p : c.packages) CHECK(check_bld(p.map, 1).verdict);
  for (const auto& m : c.maps) CHECK(m.epsilon * Rational(static_cast<long>(m.index)) <= 1);
  const ConvergenceReport r = check_package_convergence(c);
  CHECK(r.converges);
  CHECK(r.epsilons_nonincreasing);
  CHECK(check_lq(c.limit.map, 1).verdict);
  CHECK_FALSE(is_discrete(c.limit.map).holds);
  const LimitReport b = bld_limit_harness(c, 1);
  CHECK_FALSE(b.applicable);
  CHECK_FALSE(b.limit_passes);
  CHECK(lq_limit_harness(c, 1).limit_passes);

  // Tail property: any subsequence still verifies.
  CHECK(check_package_convergence(restrict_indices(c, {2, 3})).converges);
  CHECK(check_package_convergence(restrict_indices(c, {3})).converges);

  CHECK(check_package_convergence(winding_demo(1, 4)).converges);
  CHECK(check_package_convergence(winding_demo(2, 1)).converges);
}
