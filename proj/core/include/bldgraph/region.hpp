#pragma once

#include "bldgraph/graph.hpp"
#include "bldgraph/interval_set.hpp"

#include <string>
#include <vector>

namespace bldgraph {

/// A subset of a metric graph made of finitely many points and intervals.
///
/// Vertex membership is stored once per vertex; each edge carries an
/// IntervalSet confined to the open edge interior (0, length). This keeps the
/// vertex-closure consistency automatic: a vertex is in the region on every
/// incident edge or on none.
class Region {
 public:
  Region() = default;
  explicit Region(const MetricGraph& g);

  static Region whole(const MetricGraph& g);
  static Region of_points(const MetricGraph& g, const std::vector<GraphPoint>& pts);

  /// Adds the interval of e between `lo` and `hi` (0 <= lo <= hi <= length),
  /// including endpoint vertices when the corresponding end is closed.
  void add_edge_interval(const MetricGraph& g, EdgeId e, const Rational& lo, const Rational& hi,
                         bool lo_closed, bool hi_closed);
  void add_point(const MetricGraph& g, const GraphPoint& p);
  void add_vertex(VertexId v) { vertices_.at(v.value) = true; }

  bool has_vertex(VertexId v) const { return vertices_.at(v.value); }
  const IntervalSet& on_edge(EdgeId e) const { return edges_.at(e.value); }
  /// Closed-edge view: the interior set plus endpoints present as vertices.
  IntervalSet on_closed_edge(const MetricGraph& g, EdgeId e) const;

  bool contains(const GraphPoint& p) const;
  bool empty() const;

  Region unite(const Region& o) const;
  Region intersect(const Region& o) const;
  Region complement(const MetricGraph& g) const;
  Region subtract(const MetricGraph& g, const Region& o) const { return intersect(o.complement(g)); }
  bool is_subset_of(const Region& o) const { return intersect(o) == *this; }

  Region interior(const MetricGraph& g) const;
  Region closure(const MetricGraph& g) const;
  bool is_open(const MetricGraph& g) const { return interior(g) == *this; }

  std::string str(const MetricGraph& g) const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  std::vector<bool> vertices_;
  std::vector<IntervalSet> edges_;
};

}  // namespace bldgraph
