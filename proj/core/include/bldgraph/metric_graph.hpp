#pragma once

// Exact geometry of finite metric graphs: distances, geodesics, balls,
// spheres, connected components, boundaries and critical radii.
//
// Every function here is pure; the returned regions and point sets are exact.

#include "bldgraph/graph.hpp"
#include "bldgraph/region.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace bldgraph {

enum class BallKind { Open, Closed };

/// Validates `spec` and precomputes all-pairs vertex distances.
/// Throws GraphError on duplicate ids, unknown endpoints, nonpositive
/// lengths or a disconnected graph.
MetricGraph build_graph(const GraphSpec& spec);

/// d(p, v) for every vertex v, indexed by vertex id.
std::vector<Rational> distances_to_vertices(const MetricGraph& g, const GraphPoint& p);

Rational distance(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q);

/// A shortest walk from p to q. Among equal-length geodesics the
/// lexicographically smallest (edge id, direction) sequence is returned.
Walk geodesic(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q);

/// Sum of segment lengths; throws GraphError on a non-incident walk.
Rational walk_length(const MetricGraph& g, const Walk& w);

/// {y : d(x,y) < r} (Open) or {y : d(x,y) <= r} (Closed). Requires r > 0.
Region ball(const MetricGraph& g, const GraphPoint& x, const Rational& r, BallKind kind = BallKind::Open);

/// The distance sphere {y : d(x,y) = r}; finite in a metric graph. Requires r > 0.
std::vector<GraphPoint> sphere(const MetricGraph& g, const GraphPoint& x, const Rational& r);

/// Radii at which the combinatorics of sphere(g, x, .) change: distances to
/// vertices and local maxima of d(x, .) inside edges. Sorted, positive, unique.
std::vector<Rational> critical_radii(const MetricGraph& g, const GraphPoint& x);

/// Largest value of d(x, .) over the graph.
Rational eccentricity(const MetricGraph& g, const GraphPoint& x);

/// Connected components of A, ordered by their first vertex, then by first
/// (edge, offset) for components without vertices.
std::vector<Region> components(const MetricGraph& g, const Region& a);

/// Topological boundary closure(A) \ interior(A) as a sorted point list.
std::vector<GraphPoint> boundary(const MetricGraph& g, const Region& a);

/// Every point set where A meets the closed edge e, as offsets in [0, length].
IntervalSet closed_edge_set(const MetricGraph& g, const Region& a, EdgeId e);

/// Isometric refinement of a graph.
struct Subdivision {
  MetricGraph graph;
  /// For each original edge, the refined edges in order from u to v.
  std::vector<std::vector<EdgeId>> pieces;
  std::vector<Rational> piece_length;
  /// Refined edge -> (original edge, piece index).
  std::vector<std::pair<EdgeId, std::uint32_t>> edge_origin;
  /// Refined vertex -> (original edge, piece index) for new vertices; nullopt
  /// for original ones, which keep their ids.
  std::vector<std::optional<std::pair<EdgeId, std::uint32_t>>> vertex_origin;

  GraphPoint to_refined(const MetricGraph& original, const GraphPoint& p) const;
  GraphPoint to_original(const MetricGraph& original, const GraphPoint& p) const;
};

/// Splits every edge into ceil(length / delta) equal pieces (delta > 0).
Subdivision subdivide(const MetricGraph& g, const Rational& delta);

/// Sorted unique point list helper.
void sort_unique(std::vector<GraphPoint>& pts);

}  // namespace bldgraph
