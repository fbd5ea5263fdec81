#include "doctest.h"

#include "bldgraph/fixtures.hpp"
#include "bldgraph/oracle.hpp"

#include <random>

using namespace bldgraph;

namespace {

const Property kProps[] = {Property::BLD, Property::LQ, Property::Radial, Property::RadialPointwise,
                           Property::Coradial, Property::Lipschitz};

void agree(const GraphMap& f, long divisions = 64) {
  const DyadicOracle o(f, divisions);
  CHECK(o.open() == is_open(f).holds);
  CHECK(o.discrete() == is_discrete(f).holds);
  for (const Property p : kProps) {
    if (p == Property::Coradial && !is_branched_cover(f)) {
      CHECK_FALSE(o.constant(p).has_value());
      continue;
    }
    INFO(property_name(p));
    if (p == Property::BLD && !is_branched_cover(f)) {
      CHECK_FALSE(o.constant(p).has_value());
    } else {
      CHECK(o.constant(p) == min_constant(f, p));
    }
    for (const Rational L : {Rational(1), Rational(9, 8), Rational(3, 2), Rational(2), Rational(3)})
      CHECK(o.check(p, L) == check(f, p, L).verdict);
  }
  for (const Rational L : {Rational(1), Rational(3, 2), Rational(3)})
    CHECK(o.check_lq_local(L) == check_lq_local(f, L).verdict);
}

}  // namespace

TEST_CASE("oracle agrees with the exact checkers on the corpus") {
  for (const GraphMap& f : {identity_map(path_graph(3)), identity_map(cycle_graph(4, 1)), winding_map(2, 3),
                            winding_map(3, 3), tent_map(), speed2_map(), fold_map(), const_map()})
    agree(f);
}

TEST_CASE("oracle agrees on small random covers") {
  std::mt19937 rng(11);
  RandomCoverOptions opt;
  opt.max_source_vertices = 5;
  opt.max_target_vertices = 3;
  for (int k = 0; k < 6; ++k) agree(random_branched_cover(rng, opt), 16);
}
