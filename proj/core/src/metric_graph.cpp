#include "bldgraph/metric_graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace bldgraph {

// ---------------------------------------------------------------------------
// GraphPoint

bool operator==(const GraphPoint& a, const GraphPoint& b) {
  if (a.is_vertex_ != b.is_vertex_) return false;
  if (a.is_vertex_) return a.vertex_ == b.vertex_;
  return a.edge_ == b.edge_ && a.offset_ == b.offset_;
}

std::strong_ordering operator<=>(const GraphPoint& a, const GraphPoint& b) {
  // Vertices sort before interior points.
  if (a.is_vertex_ != b.is_vertex_) return a.is_vertex_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_vertex_) return a.vertex_ <=> b.vertex_;
  if (auto c = a.edge_ <=> b.edge_; c != 0) return c;
  return a.offset_ <=> b.offset_;
}

// ---------------------------------------------------------------------------
// MetricGraph

MetricGraph MetricGraph::build(const GraphSpec& spec) {
  MetricGraph g;
  if (spec.vertices.empty()) throw GraphError("graph has no vertices");
  {
    std::unordered_set<std::string> seen;
    for (const auto& v : spec.vertices)
      if (!seen.insert(v).second) throw GraphError("duplicate vertex id " + v);
  }
  g.vertex_names_ = spec.vertices;
  std::unordered_set<std::string> edge_ids;
  for (const auto& es : spec.edges) {
    if (!edge_ids.insert(es.id).second) throw GraphError("duplicate edge id " + es.id);
    auto u = g.find_vertex(es.from);
    auto v = g.find_vertex(es.to);
    if (!u || !v) throw GraphError("edge " + es.id + " has an unknown endpoint");
    if (es.length.sign() <= 0) throw GraphError("edge " + es.id + " has nonpositive length " + es.length.str());
    g.edges_.push_back(Edge{es.id, *u, *v, es.length});
  }

  // Floyd-Warshall with an explicit reachability mask.
  const std::size_t n = g.vertex_names_.size();
  std::vector<Rational> d(n * n);
  std::vector<char> known(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) known[i * n + i] = 1;
  for (const auto& e : g.edges_) {
    const std::size_t a = e.u.value, b = e.v.value;
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
      if (!known[x * n + y] || e.length < d[x * n + y]) {
        d[x * n + y] = e.length;
        known[x * n + y] = 1;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!known[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!known[k * n + j]) continue;
        Rational via = d[i * n + k] + d[k * n + j];
        if (!known[i * n + j] || via < d[i * n + j]) {
          d[i * n + j] = std::move(via);
          known[i * n + j] = 1;
        }
      }
    }
  for (std::size_t j = 0; j < n; ++j)
    if (!known[j]) throw GraphError("graph is disconnected: " + g.vertex_names_[j] + " unreachable");
  g.vertex_dist_ = std::move(d);

  if (spec.basepoint) g.basepoint_ = GraphPoint::at_vertex(g.vertex_by_name(*spec.basepoint));
  return g;
}

std::optional<VertexId> MetricGraph::find_vertex(const std::string& name) const {
  for (std::size_t i = 0; i < vertex_names_.size(); ++i)
    if (vertex_names_[i] == name) return VertexId{static_cast<std::uint32_t>(i)};
  return std::nullopt;
}

std::optional<EdgeId> MetricGraph::find_edge(const std::string& name) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].name == name) return EdgeId{static_cast<std::uint32_t>(i)};
  return std::nullopt;
}

VertexId MetricGraph::vertex_by_name(const std::string& name) const {
  if (auto v = find_vertex(name)) return *v;
  throw GraphError("unknown vertex " + name);
}

EdgeId MetricGraph::edge_by_name(const std::string& name) const {
  if (auto e = find_edge(name)) return *e;
  throw GraphError("unknown edge " + name);
}

GraphPoint MetricGraph::point(EdgeId e, const Rational& offset) const {
  const Edge& ed = edge(e);
  if (offset < 0 || offset > ed.length)
    throw GraphError("offset " + offset.str() + " outside edge " + ed.name);
  if (offset == 0) return GraphPoint::at_vertex(ed.u);
  if (offset == ed.length) return GraphPoint::at_vertex(ed.v);
  return GraphPoint::interior(e, offset);
}

Rational MetricGraph::offset_on(EdgeId e, const GraphPoint& p, bool at_end) const {
  const Edge& ed = edge(e);
  if (p.is_vertex()) {
    if (ed.is_loop() && p.vertex() == ed.u) return at_end ? ed.length : Rational(0);
    if (p.vertex() == ed.u) return 0;
    if (p.vertex() == ed.v) return ed.length;
  } else if (p.edge() == e) {
    return p.offset();
  }
  throw GraphError(describe(*this, p) + " is not on edge " + ed.name);
}

bool MetricGraph::lies_on_closed_edge(EdgeId e, const GraphPoint& p) const {
  const Edge& ed = edge(e);
  if (p.is_vertex()) return p.vertex() == ed.u || p.vertex() == ed.v;
  return p.edge() == e;
}

void MetricGraph::validate(const GraphPoint& p) const {
  if (p.is_vertex()) {
    if (p.vertex().value >= vertex_count()) throw GraphError("vertex id out of range");
    return;
  }
  if (p.edge().value >= edge_count()) throw GraphError("edge id out of range");
  const Edge& ed = edges_[p.edge().value];
  if (p.offset() <= 0 || p.offset() >= ed.length)
    throw GraphError("non-canonical point on edge " + ed.name + " at " + p.offset().str());
}

std::vector<Direction> MetricGraph::directions_at(const GraphPoint& p) const {
  validate(p);
  if (!p.is_vertex()) return {Direction{p.edge(), true}, Direction{p.edge(), false}};
  std::vector<Direction> out;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const EdgeId e{static_cast<std::uint32_t>(i)};
    if (edges_[i].u == p.vertex()) out.push_back({e, true});
    if (edges_[i].v == p.vertex()) out.push_back({e, false});
  }
  return out;
}

std::vector<EdgeId> MetricGraph::incident_edges(VertexId v) const {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].u == v || edges_[i].v == v) out.push_back(EdgeId{static_cast<std::uint32_t>(i)});
  return out;
}

Rational MetricGraph::min_edge_length() const {
  if (edges_.empty()) return 0;
  Rational m = edges_.front().length;
  for (const auto& e : edges_) m = min(m, e.length);
  return m;
}

Rational MetricGraph::max_edge_length() const {
  Rational m = 0;
  for (const auto& e : edges_) m = max(m, e.length);
  return m;
}

Rational MetricGraph::total_length() const {
  Rational s = 0;
  for (const auto& e : edges_) s += e.length;
  return s;
}

// ---------------------------------------------------------------------------
// Walks

GraphPoint segment_start(const MetricGraph& g, const Segment& s) { return g.point(s.edge, s.from); }
GraphPoint segment_end(const MetricGraph& g, const Segment& s) { return g.point(s.edge, s.to); }
Direction segment_direction(const Segment& s) { return Direction{s.edge, s.from <= s.to}; }

GraphPoint walk_end(const MetricGraph& g, const Walk& w) {
  return w.segments.empty() ? w.start : segment_end(g, w.segments.back());
}

void validate_walk(const MetricGraph& g, const Walk& w) {
  g.validate(w.start);
  GraphPoint cur = w.start;
  for (const auto& s : w.segments) {
    if (s.edge.value >= g.edge_count()) throw GraphError("walk uses an unknown edge");
    const Edge& ed = g.edge(s.edge);
    if (s.from < 0 || s.from > ed.length || s.to < 0 || s.to > ed.length)
      throw GraphError("walk segment leaves edge " + ed.name);
    if (segment_start(g, s) != cur)
      throw GraphError("walk segments are not incident at " + describe(g, cur));
    cur = segment_end(g, s);
  }
}

Walk reverse_walk(const MetricGraph& g, const Walk& w) {
  Walk r{walk_end(g, w), {}};
  for (auto it = w.segments.rbegin(); it != w.segments.rend(); ++it) r.segments.push_back({it->edge, it->to, it->from});
  return r;
}

Walk normalize_walk(const MetricGraph& g, const Walk& w) {
  (void)g;
  Walk out{w.start, {}};
  for (const auto& s : w.segments) {
    if (s.from == s.to) continue;
    if (!out.segments.empty()) {
      Segment& last = out.segments.back();
      if (last.edge == s.edge && last.to == s.from && last.forward() == s.forward()) {
        last.to = s.to;
        continue;
      }
    }
    out.segments.push_back(s);
  }
  return out;
}

Walk concatenate(const MetricGraph& g, const Walk& a, const Walk& b) {
  if (walk_end(g, a) != b.start) throw GraphError("cannot concatenate walks that do not meet");
  Walk out = a;
  out.segments.insert(out.segments.end(), b.segments.begin(), b.segments.end());
  return out;
}

std::string describe(const MetricGraph& g, const GraphPoint& p) {
  if (p.is_vertex()) return g.vertex_name(p.vertex());
  return g.edge(p.edge()).name + "@" + p.offset().str();
}

// ---------------------------------------------------------------------------
// Distances

MetricGraph build_graph(const GraphSpec& spec) { return MetricGraph::build(spec); }

std::vector<Rational> distances_to_vertices(const MetricGraph& g, const GraphPoint& p) {
  g.validate(p);
  const std::size_t n = g.vertex_count();
  std::vector<Rational> out(n);
  if (p.is_vertex()) {
    for (std::size_t w = 0; w < n; ++w) out[w] = g.vertex_distance(p.vertex(), VertexId{static_cast<std::uint32_t>(w)});
    return out;
  }
  const Edge& ed = g.edge(p.edge());
  const Rational& t = p.offset();
  const Rational back = ed.length - t;
  for (std::size_t w = 0; w < n; ++w) {
    const VertexId wv{static_cast<std::uint32_t>(w)};
    out[w] = min(t + g.vertex_distance(ed.u, wv), back + g.vertex_distance(ed.v, wv));
  }
  return out;
}

namespace {

/// d(x, .) restricted to a closed edge is the minimum of at most three affine
/// functions of the offset s: du + s, dv + len - s, and |s - t| when x sits on
/// the edge interior at offset t.
struct EdgeProfile {
  Rational du, dv, len;
  std::optional<Rational> t;

  Rational at(const Rational& s) const {
    Rational v = min(du + s, dv + len - s);
    if (t) v = min(v, abs(s - *t));
    return v;
  }
};

EdgeProfile profile(const MetricGraph& g, const std::vector<Rational>& dx, const GraphPoint& x, EdgeId e) {
  const Edge& ed = g.edge(e);
  EdgeProfile p{dx[ed.u.value], dx[ed.v.value], ed.length, std::nullopt};
  if (!x.is_vertex() && x.edge() == e) p.t = x.offset();
  return p;
}

}  // namespace

Rational distance(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q) {
  g.validate(q);
  if (p == q) return 0;
  const auto dp = distances_to_vertices(g, p);
  if (q.is_vertex()) return dp[q.vertex().value];
  return profile(g, dp, p, q.edge()).at(q.offset());
}

Walk geodesic(const MetricGraph& g, const GraphPoint& p, const GraphPoint& q) {
  g.validate(p);
  g.validate(q);
  Walk w{p, {}};
  GraphPoint cur = p;
  Rational remaining = distance(g, p, q);
  const auto dq = distances_to_vertices(g, q);
  // Greedy over directions in (edge, forward-first) order yields the
  // lexicographically smallest geodesic.
  while (cur != q) {
    bool moved = false;
    for (const Direction& dir : g.directions_at(cur)) {
      const Edge& ed = g.edge(dir.edge);
      const Rational from = g.offset_on(dir.edge, cur, !dir.forward);
      const Rational end = dir.forward ? ed.length : Rational(0);
      if (g.lies_on_closed_edge(dir.edge, q) && !q.is_vertex()) {
        const Rational& s = q.offset();
        if ((dir.forward ? s > from : s < from) && abs(s - from) == remaining) {
          w.segments.push_back({dir.edge, from, s});
          cur = q;
          moved = true;
          break;
        }
      }
      const Rational step = abs(end - from);
      const VertexId next = dir.forward ? ed.v : ed.u;
      if (step + dq[next.value] == remaining) {
        w.segments.push_back({dir.edge, from, end});
        cur = GraphPoint::at_vertex(next);
        remaining = dq[next.value];
        moved = true;
        break;
      }
    }
    if (!moved) throw GraphError("geodesic construction failed");
  }
  return w;
}

Rational walk_length(const MetricGraph& g, const Walk& w) {
  validate_walk(g, w);
  Rational s = 0;
  for (const auto& seg : w.segments) s += seg.length();
  return s;
}

Region ball(const MetricGraph& g, const GraphPoint& x, const Rational& r, BallKind kind) {
  if (r.sign() <= 0) throw GraphError("ball radius must be positive");
  const bool closed = kind == BallKind::Closed;
  const auto dx = distances_to_vertices(g, x);
  Region out(g);
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (closed ? dx[v] <= r : dx[v] < r) out.add_vertex(VertexId{static_cast<std::uint32_t>(v)});
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const EdgeId e{static_cast<std::uint32_t>(i)};
    const EdgeProfile pr = profile(g, dx, x, e);
    auto add = [&](Rational lo, Rational hi) {
      bool lc = closed, hc = closed;
      if (lo <= 0) { lo = 0; lc = false; }
      if (hi >= pr.len) { hi = pr.len; hc = false; }
      if (lo < hi || (lo == hi && lc && hc)) out.add_edge_interval(g, e, lo, hi, lc, hc);
    };
    add(-pr.len, r - pr.du);
    add(pr.len - (r - pr.dv), 2 * pr.len);
    if (pr.t) add(*pr.t - r, *pr.t + r);
  }
  return out;
}

std::vector<GraphPoint> sphere(const MetricGraph& g, const GraphPoint& x, const Rational& r) {
  if (r.sign() <= 0) throw GraphError("sphere radius must be positive");
  const auto dx = distances_to_vertices(g, x);
  std::vector<GraphPoint> out;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const EdgeId e{static_cast<std::uint32_t>(i)};
    const EdgeProfile pr = profile(g, dx, x, e);
    std::vector<Rational> cand{r - pr.du, pr.len - r + pr.dv};
    if (pr.t) {
      cand.push_back(*pr.t - r);
      cand.push_back(*pr.t + r);
    }
    for (const auto& s : cand)
      if (s >= 0 && s <= pr.len && pr.at(s) == r) out.push_back(g.point(e, s));
  }
  sort_unique(out);
  return out;
}

std::vector<Rational> critical_radii(const MetricGraph& g, const GraphPoint& x) {
  const auto dx = distances_to_vertices(g, x);
  std::vector<Rational> out;
  for (const auto& d : dx)
    if (d.sign() > 0) out.push_back(d);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const EdgeProfile pr = profile(g, dx, x, EdgeId{static_cast<std::uint32_t>(i)});
    // Local maxima sit where an increasing piece meets a decreasing one.
    std::vector<Rational> cand{(pr.dv + pr.len - pr.du) / 2};
    if (pr.t) {
      cand.push_back((*pr.t - pr.du) / 2);              // du + s = t - s
      cand.push_back((pr.dv + pr.len + *pr.t) / 2);     // s - t = dv + len - s
    }
    for (const auto& s : cand) {
      if (s <= 0 || s >= pr.len) continue;
      const Rational v = pr.at(s);
      const bool inc_hits = pr.du + s == v || (pr.t && s - *pr.t == v);
      const bool dec_hits = pr.dv + pr.len - s == v || (pr.t && *pr.t - s == v);
      if (inc_hits && dec_hits && v.sign() > 0) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational eccentricity(const MetricGraph& g, const GraphPoint& x) {
  const auto radii = critical_radii(g, x);
  return radii.empty() ? Rational(0) : radii.back();
}

// ---------------------------------------------------------------------------
// Components and boundary

std::vector<Region> components(const MetricGraph& g, const Region& a) {
  // Nodes: vertices in A, then every interval part of every edge.
  struct Node {
    bool is_vertex;
    std::uint32_t vertex;
    std::uint32_t edge;
    Interval part;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> vertex_node(g.vertex_count(), SIZE_MAX);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (!a.has_vertex(VertexId{static_cast<std::uint32_t>(v)})) continue;
    vertex_node[v] = nodes.size();
    nodes.push_back({true, static_cast<std::uint32_t>(v), 0, {}});
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (const auto& p : a.on_edge(EdgeId{static_cast<std::uint32_t>(e)}).parts())
      nodes.push_back({false, 0, static_cast<std::uint32_t>(e), p});

  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto join = [&](std::size_t i, std::size_t j) {
    i = find(i);
    j = find(j);
    if (i != j) parent[std::max(i, j)] = std::min(i, j);
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.is_vertex) continue;
    const Edge& ed = g.edges()[n.edge];
    if (n.part.lo == 0 && vertex_node[ed.u.value] != SIZE_MAX) join(i, vertex_node[ed.u.value]);
    if (n.part.hi == ed.length && vertex_node[ed.v.value] != SIZE_MAX) join(i, vertex_node[ed.v.value]);
  }

  // Roots are the smallest node index of each class, so iterating nodes in
  // order gives the documented component order.
  std::vector<Region> out;
  std::vector<std::size_t> slot(nodes.size(), SIZE_MAX);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t r = find(i);
    if (slot[r] == SIZE_MAX) {
      slot[r] = out.size();
      out.emplace_back(g);
    }
    Region& reg = out[slot[r]];
    const Node& n = nodes[i];
    if (n.is_vertex) {
      reg.add_vertex(VertexId{n.vertex});
    } else {
      reg.add_edge_interval(g, EdgeId{n.edge}, n.part.lo, n.part.hi, n.part.lo_closed, n.part.hi_closed);
    }
  }
  return out;
}

std::vector<GraphPoint> boundary(const MetricGraph& g, const Region& a) {
  const Region b = a.closure(g).subtract(g, a.interior(g));
  std::vector<GraphPoint> out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (b.has_vertex(VertexId{static_cast<std::uint32_t>(v)})) out.push_back(GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(v)}));
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const EdgeId id{static_cast<std::uint32_t>(e)};
    for (const auto& p : b.on_edge(id).parts()) {
      if (!p.is_point()) throw GraphError("boundary of a region is not finite");
      out.push_back(GraphPoint::interior(id, p.lo));
    }
  }
  return out;
}

IntervalSet closed_edge_set(const MetricGraph& g, const Region& a, EdgeId e) { return a.on_closed_edge(g, e); }

void sort_unique(std::vector<GraphPoint>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// ---------------------------------------------------------------------------
// Subdivision

Subdivision subdivide(const MetricGraph& g, const Rational& delta) {
  if (delta.sign() <= 0) throw GraphError("subdivision step must be positive");
  Subdivision sub;
  GraphSpec spec;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    spec.vertices.push_back(g.vertex_name(VertexId{static_cast<std::uint32_t>(v)}));
    sub.vertex_origin.push_back(std::nullopt);
  }
  if (auto bp = g.basepoint(); bp && bp->is_vertex()) spec.basepoint = g.vertex_name(bp->vertex());
  std::vector<std::uint32_t> counts;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& ed = g.edges()[i];
    const long k = std::max(1L, ceil_to_long(ed.length / delta));
    const Rational piece = ed.length / Rational(k);
    sub.piece_length.push_back(piece);
    const EdgeId orig{static_cast<std::uint32_t>(i)};
    std::string prev = g.vertex_name(ed.u);
    std::vector<EdgeId> ids;
    for (long j = 0; j < k; ++j) {
      std::string next;
      if (j + 1 == k) {
        next = g.vertex_name(ed.v);
      } else {
        next = ed.name + "~" + std::to_string(j + 1);
        spec.vertices.push_back(next);
        sub.vertex_origin.push_back(std::pair{orig, static_cast<std::uint32_t>(j + 1)});
      }
      const std::string name = k == 1 ? ed.name : ed.name + "." + std::to_string(j);
      ids.push_back(EdgeId{static_cast<std::uint32_t>(spec.edges.size())});
      sub.edge_origin.push_back({orig, static_cast<std::uint32_t>(j)});
      spec.edges.push_back({name, prev, next, piece});
      prev = next;
    }
    sub.pieces.push_back(std::move(ids));
  }
  sub.graph = MetricGraph::build(spec);
  return sub;
}

GraphPoint Subdivision::to_refined(const MetricGraph& original, const GraphPoint& p) const {
  original.validate(p);
  if (p.is_vertex()) return p;
  const Rational& pl = piece_length[p.edge().value];
  const auto& ids = pieces[p.edge().value];
  long k = ceil_to_long(p.offset() / pl) - 1;
  if (Rational(k) * pl == p.offset()) ++k;  // exactly on an inner vertex
  k = std::clamp<long>(k, 0, static_cast<long>(ids.size()) - 1);
  return graph.point(ids[k], p.offset() - Rational(k) * pl);
}

GraphPoint Subdivision::to_original(const MetricGraph& original, const GraphPoint& p) const {
  graph.validate(p);
  if (p.is_vertex()) {
    const auto& o = vertex_origin[p.vertex().value];
    if (!o) return p;
    return original.point(o->first, Rational(static_cast<long>(o->second)) * piece_length[o->first.value]);
  }
  const auto& [e, k] = edge_origin[p.edge().value];
  return original.point(e, Rational(static_cast<long>(k)) * piece_length[e.value] + p.offset());
}

}  // namespace bldgraph
