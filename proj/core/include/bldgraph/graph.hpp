#pragma once

#include "bldgraph/rational.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bldgraph {

struct VertexId {
  std::uint32_t value = 0;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct EdgeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

/// Raised for malformed graphs, points, walks and regions.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point of the geodesic realization of a metric graph.
///
/// Canonical form: a vertex, or an edge together with an offset strictly inside
/// (0, length) measured from the edge's `u` endpoint. Use MetricGraph::point()
/// to build canonical points from arbitrary offsets.
class GraphPoint {
 public:
  GraphPoint() = default;
  static GraphPoint at_vertex(VertexId v) { return GraphPoint(v); }
  /// Unchecked; the caller guarantees 0 < offset < length(e).
  static GraphPoint interior(EdgeId e, Rational offset) { return GraphPoint(e, std::move(offset)); }

  bool is_vertex() const { return is_vertex_; }
  VertexId vertex() const { return vertex_; }
  EdgeId edge() const { return edge_; }
  const Rational& offset() const { return offset_; }

  friend bool operator==(const GraphPoint& a, const GraphPoint& b);
  friend std::strong_ordering operator<=>(const GraphPoint& a, const GraphPoint& b);

 private:
  explicit GraphPoint(VertexId v) : is_vertex_(true), vertex_(v) {}
  GraphPoint(EdgeId e, Rational off) : is_vertex_(false), edge_(e), offset_(std::move(off)) {}

  bool is_vertex_ = true;
  VertexId vertex_{};
  EdgeId edge_{};
  Rational offset_{};
};

/// A germ of direction at a point: travel along `edge` with increasing offset
/// (`forward`) or decreasing offset. At a vertex `v`, {e, true} leaves through
/// the u-end of e and {e, false} through the v-end, so the two ends of a
/// self-loop are distinct directions.
struct Direction {
  EdgeId edge{};
  bool forward = true;
  friend auto operator<=>(const Direction&, const Direction&) = default;
};

/// Monotone traversal of part of one edge, from offset `from` to offset `to`.
struct Segment {
  EdgeId edge{};
  Rational from;
  Rational to;

  Rational length() const { return abs(to - from); }
  bool forward() const { return from <= to; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// A finite concatenation of segments; `start` fixes the point of an empty walk.
struct Walk {
  GraphPoint start;
  std::vector<Segment> segments;

  bool empty() const { return segments.empty(); }
  friend bool operator==(const Walk&, const Walk&) = default;
};

struct Edge {
  std::string name;
  VertexId u;
  VertexId v;
  Rational length;
  bool is_loop() const { return u == v; }
};

/// Input description of a graph; see build_graph().
struct GraphSpec {
  struct EdgeSpec {
    std::string id;
    std::string from;
    std::string to;
    Rational length;
  };
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
  std::optional<std::string> basepoint;
};

/// Finite connected multigraph with positive rational edge lengths, viewed
/// as its geodesic realization. Immutable once built.
class MetricGraph {
 public:
  static MetricGraph build(const GraphSpec& spec);

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v.value); }
  const Edge& edge(EdgeId e) const { return edges_.at(e.value); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<VertexId> find_vertex(const std::string& name) const;
  std::optional<EdgeId> find_edge(const std::string& name) const;
  VertexId vertex_by_name(const std::string& name) const;
  EdgeId edge_by_name(const std::string& name) const;

  std::optional<GraphPoint> basepoint() const { return basepoint_; }

  /// Exact shortest-path distance between vertices.
  const Rational& vertex_distance(VertexId a, VertexId b) const {
    return vertex_dist_[a.value * vertex_count() + b.value];
  }

  /// Canonical point at `offset` along e; throws if offset is outside [0, length].
  GraphPoint point(EdgeId e, const Rational& offset) const;
  /// Offset of p measured along e; p must lie on the closed edge e.
  /// For a self-loop vertex, `at_end` selects the v-end.
  Rational offset_on(EdgeId e, const GraphPoint& p, bool at_end = false) const;
  bool lies_on_closed_edge(EdgeId e, const GraphPoint& p) const;

  void validate(const GraphPoint& p) const;
  /// Every direction at p, in (edge, forward-first) order.
  std::vector<Direction> directions_at(const GraphPoint& p) const;
  std::vector<EdgeId> incident_edges(VertexId v) const;

  Rational min_edge_length() const;
  Rational max_edge_length() const;
  Rational total_length() const;

 private:
  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::vector<Rational> vertex_dist_;
  std::optional<GraphPoint> basepoint_;
};

/// End point of a walk (its start when empty).
GraphPoint walk_end(const MetricGraph& g, const Walk& w);
/// Throws GraphError unless consecutive segments are incident and in range.
void validate_walk(const MetricGraph& g, const Walk& w);
/// Start/end points of a segment as canonical points.
GraphPoint segment_start(const MetricGraph& g, const Segment& s);
GraphPoint segment_end(const MetricGraph& g, const Segment& s);
/// Direction in which a positive-length segment leaves its start point.
Direction segment_direction(const Segment& s);
/// Reverses a walk in place order and orientation.
Walk reverse_walk(const MetricGraph& g, const Walk& w);
/// Drops zero-length segments and merges consecutive collinear segments.
Walk normalize_walk(const MetricGraph& g, const Walk& w);
Walk concatenate(const MetricGraph& g, const Walk& a, const Walk& b);

std::string describe(const MetricGraph& g, const GraphPoint& p);

}  // namespace bldgraph
