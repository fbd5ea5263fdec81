#pragma once

// Exact decision procedures for the metric conditions on a PL map:
// bounded length distortion, Lipschitz quotient (global and local), radial
// (via direction speeds and pointwise), coradial, and their minimal constants.
//
// Every universally quantified condition reduces to finitely many exact
// tests. Local conditions are evaluated at candidate centers (breakpoints and
// one point per affine regime) at a radius below the first critical radius,
// where balls and U-components are stars and all distances are linear in r.

#include "bldgraph/graph_map.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace bldgraph {

enum class Property { BLD, LQ, Radial, RadialPointwise, Coradial, Lipschitz };

std::string_view property_name(Property p);
/// Accepts "bld", "lq", "radial", "radial-pointwise", "coradial", "lipschitz".
std::optional<Property> parse_property(std::string_view name);

struct Witness {
  GraphPoint center;
  std::optional<Rational> radius;
  std::optional<GraphPoint> point;
  std::string inequality;
  /// `point` lies in the target (the uncovered point of an LQ failure).
  bool point_in_target = false;
};

struct TopologyFlags {
  bool open = false;
  bool discrete = false;
  bool branched_cover = false;
  static TopologyFlags of(const GraphMap& f);
};

struct PropertyReport {
  Property property{};
  std::optional<Rational> L;
  bool verdict = false;
  std::optional<Witness> witness;
  /// Least passing constant; nullopt when none exists or the property does
  /// not apply.
  std::optional<Rational> minimal;
  TopologyFlags topology;
  /// Smallest radius r0 used among the local tests.
  std::optional<Rational> r0;
};

struct LocalIndices {
  GraphPoint center;
  Rational r;
  Rational L;                      ///< sup over the sphere; 0 when it is empty
  std::optional<Rational> l;       ///< inf over the sphere; nullopt = +inf
  Rational L_star;                 ///< sup over ∂U(x, f, r); 0 when empty
  std::optional<Rational> l_star;  ///< nullopt = +inf
};

LocalIndices local_indices(const GraphMap& f, const GraphPoint& x, const Rational& r);

PropertyReport check_bld(const GraphMap& f, const Rational& L);
/// Requires a branched cover.
Rational min_bld_constant(const GraphMap& f);

PropertyReport check_lipschitz(const GraphMap& f, const Rational& L);
PropertyReport check_lq(const GraphMap& f, const Rational& L);
PropertyReport check_lq_local(const GraphMap& f, const Rational& L);
PropertyReport check_radial(const GraphMap& f, const Rational& L);
PropertyReport check_radial_pointwise(const GraphMap& f, const Rational& L);
/// Throws PreconditionError unless f is a branched cover.
PropertyReport check_coradial(const GraphMap& f, const Rational& L);

PropertyReport check(const GraphMap& f, Property p, const Rational& L);

/// Least L >= 1 passing the check (the Lipschitz constant itself for
/// LIPSCHITZ); nullopt when no constant works. Throws PreconditionError for
/// BLD and CORADIAL when f is not a branched cover.
std::optional<Rational> min_constant(const GraphMap& f, Property p);

struct Characterization {
  TopologyVerdict open;
  TopologyVerdict discrete;
  bool branched_cover = false;
  Rational lipschitz;
  /// nullopt: no finite constant. Unset `*_applies` means the property is
  /// only defined for branched covers and f is not one.
  std::optional<Rational> bld, lq, radial, coradial;
  bool bld_applies = false, coradial_applies = false;
  /// Branched cover and all four constants finite and equal.
  bool equivalence_certified = false;
  std::vector<std::string> notes;
};

Characterization characterize(const GraphMap& f);

}  // namespace bldgraph
