#include "doctest.h"

#include "bldgraph/checkers.hpp"
#include "bldgraph/fixtures.hpp"

#include <random>

using namespace bldgraph;

namespace {

GraphPoint vtx(const MetricGraph& g, const std::string& name) { return GraphPoint::at_vertex(g.vertex_by_name(name)); }

}  // namespace

TEST_CASE("local indices") {
  const GraphMap t = tent_map();
  const LocalIndices a = local_indices(t, vtx(t.source(), "v1"), Rational(1, 2));
  CHECK(a.L == Rational(1, 2));
  CHECK(*a.l == Rational(1, 2));
  CHECK(a.L_star == Rational(1, 2));
  CHECK(*a.l_star == Rational(1, 2));

  const GraphMap s = speed2_map();
  const LocalIndices b = local_indices(s, vtx(s.source(), "v0"), Rational(1, 4));
  CHECK(b.L == Rational(1, 2));
  CHECK(*b.l == Rational(1, 2));
  CHECK(b.L_star == Rational(1, 8));
  CHECK(*b.l_star == Rational(1, 8));

  const GraphMap id = identity_map(cycle_graph(4, 1));
  const LocalIndices c = local_indices(id, id.source().point(EdgeId{1}, Rational(1, 3)), Rational(3, 2));
  CHECK(c.L == Rational(3, 2));
  CHECK(*c.l == Rational(3, 2));

  // A one-point source has an empty sphere.
  const GraphMap pt = identity_map(point_graph());
  const LocalIndices d = local_indices(pt, GraphPoint::at_vertex(VertexId{0}), 1);
  CHECK(d.L == 0);
  CHECK_FALSE(d.l.has_value());
  CHECK_THROWS_AS(local_indices(pt, GraphPoint::at_vertex(VertexId{0}), 0), PreconditionError);
}

TEST_CASE("bounded length distortion") {
  CHECK(check_bld(winding_map(2, 3), 1).verdict);
  CHECK(min_bld_constant(winding_map(2, 3)) == 1);
  const auto s = check_bld(speed2_map(), 1);
  CHECK_FALSE(s.verdict);
  REQUIRE(s.witness.has_value());
  CHECK(*s.minimal == 2);
  CHECK(check_bld(speed2_map(), 2).verdict);

  const auto f = check_bld(fold_map(), 100);
  CHECK_FALSE(f.verdict);
  CHECK_FALSE(f.topology.open);
  CHECK(f.witness->inequality.starts_with("not open"));
  const auto c = check_bld(const_map(), 100);
  CHECK_FALSE(c.verdict);
  CHECK(c.witness->inequality.starts_with("not discrete"));
  CHECK_THROWS_AS(min_bld_constant(fold_map()), PreconditionError);
  CHECK_THROWS_AS(check_bld(tent_map(), Rational(1, 2)), PreconditionError);
}

TEST_CASE("Lipschitz") {
  CHECK(check_lipschitz(const_map(), 1).verdict);
  CHECK(check_lipschitz(const_map(), 0).verdict);
  CHECK(check_lipschitz(speed2_map(), 2).verdict);
  const auto r = check_lipschitz(speed2_map(), Rational(3, 2));
  CHECK_FALSE(r.verdict);
  REQUIRE(r.witness.has_value());
  const GraphMap s = speed2_map();
  CHECK(distance(s.target(), s.eval(r.witness->center), s.eval(*r.witness->point)) >
        Rational(3, 2) * distance(s.source(), r.witness->center, *r.witness->point));
  CHECK(check_lipschitz(identity_map(path_graph(3)), 1).verdict);
}

TEST_CASE("Lipschitz quotient, global and local") {
  CHECK(check_lq(const_map(), 1).verdict);
  CHECK(check_lq(winding_map(2, 3), 1).verdict);
  CHECK(check_lq(tent_map(), 1).verdict);
  CHECK(*check_lq(speed2_map(), 1).minimal == 2);
  CHECK_FALSE(check_lq(speed2_map(), Rational(3, 2)).verdict);
  CHECK(check_lq(speed2_map(), 2).verdict);

  const GraphMap fold = fold_map();
  const auto r = check_lq(fold, 1);
  CHECK_FALSE(r.verdict);
  REQUIRE(r.witness.has_value());
  CHECK_FALSE(r.minimal.has_value());
  // The witness is a genuine failure of the left inclusion.
  const Region img = image_region(fold, ball(fold.source(), r.witness->center, *r.witness->radius));
  CHECK(ball(fold.target(), fold.eval(r.witness->center), *r.witness->radius).contains(*r.witness->point));
  CHECK_FALSE(img.contains(*r.witness->point));

  CHECK(check_lq_local(winding_map(2, 3), 1).verdict);
  CHECK(check_lq_local(identity_map(cycle_graph(4)), 1).verdict);
  CHECK(check_lq_local(identity_map(cycle_graph(4)), 3).verdict);
  const auto fl = check_lq_local(fold, 1);
  CHECK_FALSE(fl.verdict);
  CHECK(fl.witness->center == vtx(fold.source(), "v1"));
  CHECK(check_lq_local(const_map(), 1).verdict);
}

TEST_CASE("radial and coradial") {
  CHECK(check_radial(fold_map(), 1).verdict);
  CHECK(check_radial(speed2_map(), 2).verdict);
  const auto s = check_radial(speed2_map(), Rational(3, 2));
  CHECK_FALSE(s.verdict);
  CHECK(s.witness->point.has_value());
  CHECK(check_radial(identity_map(path_graph(3)), 1).verdict);
  CHECK_FALSE(check_radial(const_map(), 100).verdict);
  CHECK_FALSE(min_constant(const_map(), Property::Radial).has_value());

  for (const Rational L : {Rational(1), Rational(3, 2), Rational(2)}) {
    for (const auto& f : {fold_map(), speed2_map(), tent_map(), const_map(), winding_map(3, 3)})
      CHECK(check_radial(f, L).verdict == check_radial_pointwise(f, L).verdict);
  }

  CHECK(check_coradial(tent_map(), 1).verdict);
  CHECK(check_coradial(speed2_map(), 2).verdict);
  CHECK_FALSE(check_coradial(speed2_map(), Rational(3, 2)).verdict);
  CHECK(check_coradial(winding_map(3, 3), 1).verdict);
  CHECK_THROWS_AS(check_coradial(const_map(), 1), PreconditionError);
}

TEST_CASE("minimal constants and characterization") {
  for (const Property p : {Property::BLD, Property::LQ, Property::Radial, Property::Coradial}) {
    CHECK(*min_constant(winding_map(2, 3), p) == 1);
    CHECK(*min_constant(speed2_map(), p) == 2);
    CHECK(*min_constant(identity_map(path_graph(3)), p) == 1);
  }
  const Characterization w = characterize(winding_map(2, 3));
  CHECK(w.equivalence_certified);
  CHECK(*w.bld == 1);

  const Characterization fold = characterize(fold_map());
  CHECK_FALSE(fold.branched_cover);
  CHECK(*fold.radial == 1);
  CHECK_FALSE(fold.lq.has_value());
  CHECK_FALSE(fold.open.holds);

  const Characterization c = characterize(const_map());
  CHECK(*c.lq == 1);
  CHECK_FALSE(c.discrete.holds);
  CHECK_FALSE(c.equivalence_certified);

  CHECK(parse_property("radial-pointwise") == Property::RadialPointwise);
  CHECK_FALSE(parse_property("nope").has_value());
  CHECK(property_name(Property::Coradial) == "coradial");
}

TEST_CASE("four minimal constants agree on random branched covers") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const GraphMap f = random_branched_cover(rng);
    REQUIRE(is_branched_cover(f));
    const Rational b = *min_constant(f, Property::BLD);
    CHECK(*min_constant(f, Property::LQ) == b);
    CHECK(*min_constant(f, Property::Radial) == b);
    CHECK(*min_constant(f, Property::Coradial) == b);
    CHECK(*min_constant(f, Property::RadialPointwise) == b);
    // Monotonicity and local-to-global.
    CHECK(check_lq(f, b).verdict);
    CHECK(check_lq(f, b + 1).verdict);
    CHECK(check_lq_local(f, b).verdict);
    if (b > 1) {
      CHECK_FALSE(check_lq(f, (b + 1) / 2).verdict);
      CHECK_FALSE(check_radial(f, (b + 1) / 2).verdict);
      CHECK_FALSE(check_coradial(f, (b + 1) / 2).verdict);
    }
  }
}
