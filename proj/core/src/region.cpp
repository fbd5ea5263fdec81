#include "bldgraph/region.hpp"

#include <sstream>

namespace bldgraph {

namespace {

Interval open_interior(const Rational& len) { return Interval{Rational(0), len, false, false}; }

}  // namespace

Region::Region(const MetricGraph& g) : vertices_(g.vertex_count(), false), edges_(g.edge_count()) {}

Region Region::whole(const MetricGraph& g) {
  Region r(g);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) r.vertices_[v] = true;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    r.edges_[e] = IntervalSet::of(open_interior(g.edges()[e].length));
  return r;
}

Region Region::of_points(const MetricGraph& g, const std::vector<GraphPoint>& pts) {
  Region r(g);
  for (const auto& p : pts) r.add_point(g, p);
  return r;
}

void Region::add_edge_interval(const MetricGraph& g, EdgeId e, const Rational& lo, const Rational& hi,
                               bool lo_closed, bool hi_closed) {
  const Edge& ed = g.edge(e);
  if (lo < 0 || hi > ed.length) throw GraphError("edge interval outside edge " + ed.name);
  if (hi < lo || (lo == hi && !(lo_closed && hi_closed))) return;
  if (lo == 0 && lo_closed) vertices_[ed.u.value] = true;
  if (hi == ed.length && hi_closed) vertices_[ed.v.value] = true;
  if (lo == hi && (lo == 0 || hi == ed.length)) return;
  Interval in{lo, hi, lo_closed, hi_closed};
  if (in.lo == 0) in.lo_closed = false;
  if (in.hi == ed.length) in.hi_closed = false;
  edges_[e.value] = edges_[e.value].unite(IntervalSet::of(in));
}

void Region::add_point(const MetricGraph& g, const GraphPoint& p) {
  g.validate(p);
  if (p.is_vertex()) {
    vertices_[p.vertex().value] = true;
  } else {
    edges_[p.edge().value] = edges_[p.edge().value].unite(
        IntervalSet::of(Interval{p.offset(), p.offset(), true, true}));
  }
}

IntervalSet Region::on_closed_edge(const MetricGraph& g, EdgeId e) const {
  const Edge& ed = g.edge(e);
  IntervalSet s = edges_[e.value];
  if (vertices_[ed.u.value]) s = s.unite(IntervalSet::of(Interval{0, 0, true, true}));
  if (vertices_[ed.v.value]) s = s.unite(IntervalSet::of(Interval{ed.length, ed.length, true, true}));
  return s;
}

bool Region::contains(const GraphPoint& p) const {
  if (p.is_vertex()) return vertices_.at(p.vertex().value);
  return edges_.at(p.edge().value).contains(p.offset());
}

bool Region::empty() const {
  for (bool b : vertices_)
    if (b) return false;
  for (const auto& s : edges_)
    if (!s.empty()) return false;
  return true;
}

Region Region::unite(const Region& o) const {
  Region r = *this;
  for (std::size_t v = 0; v < vertices_.size(); ++v) r.vertices_[v] = vertices_[v] || o.vertices_[v];
  for (std::size_t e = 0; e < edges_.size(); ++e) r.edges_[e] = edges_[e].unite(o.edges_[e]);
  return r;
}

Region Region::intersect(const Region& o) const {
  Region r = *this;
  for (std::size_t v = 0; v < vertices_.size(); ++v) r.vertices_[v] = vertices_[v] && o.vertices_[v];
  for (std::size_t e = 0; e < edges_.size(); ++e) r.edges_[e] = edges_[e].intersect(o.edges_[e]);
  return r;
}

Region Region::complement(const MetricGraph& g) const {
  Region r(g);
  for (std::size_t v = 0; v < vertices_.size(); ++v) r.vertices_[v] = !vertices_[v];
  for (std::size_t e = 0; e < edges_.size(); ++e)
    r.edges_[e] = edges_[e].complement_in(open_interior(g.edges()[e].length));
  return r;
}

Region Region::interior(const MetricGraph& g) const {
  Region r(g);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    std::vector<Interval> parts;
    for (const auto& p : edges_[e].parts()) {
      if (p.lo == p.hi) continue;
      parts.push_back(Interval{p.lo, p.hi, false, false});
    }
    r.edges_[e] = IntervalSet(std::move(parts));
  }
  // A vertex is interior iff every incident edge-end is covered by a set
  // starting right at that end.
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!vertices_[v]) continue;
    bool interior = true;
    for (std::size_t e = 0; e < edges_.size() && interior; ++e) {
      const Edge& ed = g.edges()[e];
      const auto& parts = edges_[e].parts();
      if (ed.u.value == v) interior = !parts.empty() && parts.front().lo == 0;
      if (interior && ed.v.value == v) interior = !parts.empty() && parts.back().hi == ed.length;
    }
    r.vertices_[v] = interior;
  }
  return r;
}

Region Region::closure(const MetricGraph& g) const {
  Region r = *this;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = g.edges()[e];
    std::vector<Interval> parts;
    for (const auto& p : edges_[e].parts()) {
      if (p.lo == 0) r.vertices_[ed.u.value] = true;
      if (p.hi == ed.length) r.vertices_[ed.v.value] = true;
      parts.push_back(Interval{p.lo, p.hi, p.lo > 0, p.hi < ed.length});
    }
    r.edges_[e] = IntervalSet(std::move(parts));
  }
  return r;
}

std::string Region::str(const MetricGraph& g) const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!vertices_[v]) continue;
    os << (first ? "" : ", ") << g.vertex_name(VertexId{static_cast<std::uint32_t>(v)});
    first = false;
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].empty()) continue;
    os << (first ? "" : ", ") << g.edges()[e].name << ":" << edges_[e].str();
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace bldgraph
