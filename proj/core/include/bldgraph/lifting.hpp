#pragma once

// Path lifting through branched covers.
//
// Every piece of a PL map covers a whole target edge, so each segment of a
// base walk lifts into a single piece by the inverse affine map. The only
// choices happen at points where several source directions share the image
// direction that the base walk leaves along.

#include "bldgraph/graph_map.hpp"

#include <optional>
#include <vector>

namespace bldgraph {

struct Lift {
  Walk base;   ///< β in Y
  Walk path;   ///< α in X, normalized
  GraphPoint start;
  bool total = false;
  /// For each segment of β where several continuations existed, the index of
  /// the one taken among the candidates in (edge, forward-first) order.
  std::vector<std::size_t> choices;
};

/// Deterministic total lift of β from x0. At a choice point it continues
/// along a direction that does not reverse the previous lifted segment when
/// one exists, then takes the smallest (edge, forward-first) candidate.
/// Throws PreconditionError unless f is a branched cover with f(x0) = β(0).
Lift total_lift(const GraphMap& f, const Walk& beta, const GraphPoint& x0);

struct LiftSet {
  std::vector<Lift> lifts;
  bool truncated = false;  ///< enumeration stopped at the limit
};

/// Every distinct lift of β obtained by following all non-reversing
/// continuations, from each point of `starts` (default: the whole fiber over
/// β(0)).
LiftSet all_maximal_lifts(const GraphMap& f, const Walk& beta,
                          const std::optional<std::vector<GraphPoint>>& starts = std::nullopt,
                          std::size_t limit = 100000);

struct FiberTransport {
  GraphPoint x, y;
  std::vector<GraphPoint> source_fiber;  ///< f^{-1}(x)
  std::vector<GraphPoint> target_fiber;  ///< f^{-1}(y)
  std::vector<std::size_t> pairing;      ///< source index -> target index
  std::vector<Rational> distances;       ///< d(a, ψ(a))
  Rational bound;                        ///< L·d(x, y)
  bool bijective = false;
  bool within_bound = false;
};

/// ψ_f: lifts a geodesic from x to y from every fiber point over x and pairs
/// the endpoints bijectively. Requires check_bld(f, L) to pass and x, y to
/// avoid the image of the branch set (PreconditionError otherwise).
FiberTransport fiber_transport(const GraphMap& f, const GraphPoint& x, const GraphPoint& y, const Rational& L);

/// f∘α equals β after normalization, and ℓ(β) = Σ speed·(length of α on each edge).
bool verify_lift(const GraphMap& f, const Walk& alpha, const Walk& beta);

}  // namespace bldgraph
