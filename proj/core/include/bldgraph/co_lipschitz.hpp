#pragma once

// Exact supremum of the co-Lipschitz ratio
//
//     rho(x, z) / d(f(x), z),   rho(x, z) = d(x, f^{-1}(z)),
//
// over all x in X and z in Y with z != f(x). A map satisfies the lower
// ball inclusion B(f(x), r/L) ⊆ f(B(x, r)) for every x and r exactly when
// this supremum is at most L (an empty fiber makes it infinite).
//
// Both rho and d(f(x), z) are minima of affine functions of the edge
// parameters (s, t) on finitely many convex cells, so the supremum is
// attained at a vertex of the common refinement of their argmin polygons.

#include "bldgraph/graph_map.hpp"

#include <optional>

namespace bldgraph {

/// d(x, f^{-1}(z)); nullopt when z has no preimage.
std::optional<Rational> fiber_distance(const GraphMap& f, const GraphPoint& x, const GraphPoint& z);

struct CoLipschitzSup {
  /// nullopt when the supremum is infinite.
  std::optional<Rational> value;
  /// A pair (x, z) with rho(x, z) > L * d(f(x), z) is found by witness();
  /// these record where the supremum is approached.
  std::optional<GraphPoint> x;
  std::optional<GraphPoint> z;
  std::size_t cells = 0;
  std::size_t polygons = 0;
};

CoLipschitzSup co_lipschitz_sup(const GraphMap& f);

/// A concrete pair violating rho(x, z) <= L d(f(x), z), or nullopt when
/// the supremum is at most L.
struct CoLipschitzWitness {
  GraphPoint x;
  GraphPoint z;
  std::optional<Rational> rho;  ///< nullopt: empty fiber
  Rational dist;                ///< d(f(x), z)
};
std::optional<CoLipschitzWitness> co_lipschitz_witness(const GraphMap& f, const Rational& L);

}  // namespace bldgraph
