#pragma once

// Piecewise-linear maps between metric graphs.
//
// A GraphMap sends each vertex of X to a vertex of Y and each edge of X to a
// walk in Y traversed at constant speed. The walk is cut into pieces, one per
// segment, so on a piece the map is affine from a source offset interval onto
// a target offset interval of a single target edge.

#include "bldgraph/graph.hpp"
#include "bldgraph/metric_graph.hpp"
#include "bldgraph/region.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bldgraph {

/// A documented hypothesis of an operation does not hold (for example a
/// branched-cover-only operation called on a fold).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Affine part of an edge map: source offsets [s0, s1] go to target offsets
/// a0 -> a1 along `target` (a0 != a1).
struct Piece {
  Rational s0, s1;
  EdgeId target;
  Rational a0, a1;

  Rational target_at(const Rational& s) const { return a0 + (a1 - a0) * (s - s0) / (s1 - s0); }
  Rational source_at(const Rational& a) const { return s0 + (s1 - s0) * (a - a0) / (a1 - a0); }
  bool increasing() const { return a0 < a1; }
};

/// Vertex and edge assignment by name; see build_map().
struct MapSpec {
  std::vector<std::pair<std::string, std::string>> vertex_map;
  /// Source edge name -> image walk given as (target edge, traversed forward).
  /// An empty list collapses the edge onto the common image of its endpoints.
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, bool>>>> edge_map;
};

class GraphMap {
 public:
  /// Builds from explicit image walks, one per source edge in id order.
  /// Throws GraphError on a discontinuity or an invalid walk.
  static GraphMap build(MetricGraph source, MetricGraph target, std::vector<VertexId> vertex_map,
                        std::vector<Walk> edge_walks);

  const MetricGraph& source() const { return source_; }
  const MetricGraph& target() const { return target_; }

  VertexId vertex_image(VertexId v) const { return vertex_map_.at(v.value); }
  const Walk& edge_walk(EdgeId e) const { return edge_walks_.at(e.value); }
  /// Image walk length / edge length; zero for a collapsed edge.
  const Rational& speed(EdgeId e) const { return speeds_.at(e.value); }
  const std::vector<Piece>& pieces(EdgeId e) const { return pieces_.at(e.value); }
  bool collapsed(EdgeId e) const { return pieces_.at(e.value).empty(); }

  Rational max_speed() const;
  /// Smallest edge speed; zero when some edge collapses.
  Rational min_speed() const;

  GraphPoint eval(const GraphPoint& p) const;

 private:
  MetricGraph source_;
  MetricGraph target_;
  std::vector<VertexId> vertex_map_;
  std::vector<Walk> edge_walks_;
  std::vector<Rational> speeds_;
  std::vector<std::vector<Piece>> pieces_;
};

/// Resolves names in `spec`; every source vertex and edge must be assigned.
GraphMap build_map(const MetricGraph& x, const MetricGraph& y, const MapSpec& spec);

GraphMap identity_map(const MetricGraph& g);

/// f∘w as a walk in the target; zero-length image pieces are dropped.
Walk image_walk(const GraphMap& f, const Walk& w);

/// f(A).
Region image_region(const GraphMap& f, const Region& a);
/// f^{-1}(B).
Region preimage_region(const GraphMap& f, const Region& b);

/// Local model of f at a point: every direction at p with the direction it
/// is sent to (none for a collapsed edge) and the speed along it.
struct DirectionProfile {
  struct Entry {
    Direction source;
    std::optional<Direction> image;
    Rational speed;
  };
  GraphPoint point;
  GraphPoint image_point;
  std::vector<Entry> entries;
};

DirectionProfile direction_profile(const GraphMap& f, const GraphPoint& p);

/// Vertices of X and interior points where a piece ends.
std::vector<GraphPoint> breakpoints(const GraphMap& f);
/// Breakpoints plus the midpoint of every piece and of every collapsed edge:
/// one representative of each affine regime of the map.
std::vector<GraphPoint> candidate_centers(const GraphMap& f);

/// Result of a topological test; `point` and `detail` explain a failure.
struct TopologyVerdict {
  bool holds = true;
  std::optional<GraphPoint> point;
  std::optional<EdgeId> edge;
  std::optional<Direction> uncovered;
  std::string detail;
};

TopologyVerdict is_discrete(const GraphMap& f);
TopologyVerdict is_open(const GraphMap& f);
/// Continuity is enforced at construction, so this is discreteness and openness.
bool is_branched_cover(const GraphMap& f);

/// Points where f is not locally injective. Throws PreconditionError unless
/// f is a branched cover.
std::vector<GraphPoint> branch_set(const GraphMap& f);

struct Fiber {
  GraphPoint y;
  /// The isolated fiber points; when not discrete, the points outside collapsed edges.
  std::vector<GraphPoint> points;
  Region region;
  bool discrete = true;
};

Fiber fiber(const GraphMap& f, const GraphPoint& y);

/// #(A ∩ f^{-1}(y)); nullopt when that set is infinite.
std::optional<std::size_t> multiplicity(const GraphMap& f, const GraphPoint& y, const Region& a);
/// sup over y in Y of multiplicity(f, y, A); nullopt when infinite.
std::optional<std::size_t> max_multiplicity(const GraphMap& f, const Region& a);

// ---------------------------------------------------------------------------
// Normal domains

/// U(x, f, r): the component of f^{-1}(B(f(x), r)) containing x (open ball).
Region u_component(const GraphMap& f, const GraphPoint& x, const Rational& r);

/// ∂f(U) = f(∂U). Throws PreconditionError unless U is open and connected.
bool is_normal_domain(const GraphMap& f, const Region& u);
/// Normal domain whose closure meets f^{-1}(f(x)) exactly in {x}.
bool is_normal_neighbourhood(const GraphMap& f, const Region& u, const GraphPoint& x);

/// Largest r_x such that U(x, f, r) is a normal neighbourhood of x for all
/// r < r_x, capped at the radius max_z d(f(x), f(z)) beyond which U stops
/// changing. Requires a branched cover.
Rational max_normal_radius(const GraphMap& f, const GraphPoint& x);

struct NormalDecomposition {
  Rational radius_bound;         ///< r_y
  Rational witness_radius;       ///< r at which the parts were computed
  std::vector<GraphPoint> centers;  ///< U ∩ f^{-1}(y)
  std::vector<Region> parts;     ///< U(z, f, r) for each center
  bool disjoint = false;
  bool union_matches = false;    ///< union of parts == U ∩ f^{-1}(B(y, r))
  bool all_normal = false;
};

/// Splits U ∩ f^{-1}(B(y, r)) into the normal neighbourhoods of the fiber
/// points of y in U. Requires a branched cover, a normal domain U and y ∈ f(U).
NormalDecomposition normal_decomposition(const GraphMap& f, const Region& u, const GraphPoint& y);

/// Whether U ∩ f^{-1}(W) is connected for a normal neighbourhood U of x and a
/// connected open W with f(x) ∈ W ⊆ f(U).
bool connected_preimage_check(const GraphMap& f, const GraphPoint& x, const Region& u, const Region& w);

}  // namespace bldgraph
