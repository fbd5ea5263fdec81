#include "bldgraph/graph_map.hpp"

#include <algorithm>
#include <set>

namespace bldgraph {

namespace {

EdgeId eid(std::size_t i) { return EdgeId{static_cast<std::uint32_t>(i)}; }
VertexId vid(std::size_t i) { return VertexId{static_cast<std::uint32_t>(i)}; }

Interval closed(const Rational& a, const Rational& b) { return Interval{min(a, b), max(a, b), true, true}; }

// Source offsets of a piece whose image lies in `target_set`.
IntervalSet pull_back(const Piece& p, const IntervalSet& target_set) {
  const IntervalSet hit = target_set.intersect(IntervalSet::of(closed(p.a0, p.a1)));
  const Rational k = (p.s1 - p.s0) / (p.a1 - p.a0);
  return hit.affine_image(k, p.s0 - k * p.a0);
}

// Target offsets hit by the piece on the source offsets in `source_set`.
IntervalSet push_forward(const Piece& p, const IntervalSet& source_set) {
  const IntervalSet hit = source_set.intersect(IntervalSet::of(closed(p.s0, p.s1)));
  const Rational k = (p.a1 - p.a0) / (p.s1 - p.s0);
  return hit.affine_image(k, p.a0 - k * p.s0);
}

void add_set(Region& r, const MetricGraph& g, EdgeId e, const IntervalSet& s) {
  for (const auto& part : s.parts()) r.add_edge_interval(g, e, part.lo, part.hi, part.lo_closed, part.hi_closed);
}

// Offsets along edge e at which the closed edge passes through point y.
std::vector<Rational> offsets_of(const MetricGraph& g, EdgeId e, const GraphPoint& y) {
  const Edge& ed = g.edge(e);
  std::vector<Rational> out;
  if (y.is_vertex()) {
    if (ed.u == y.vertex()) out.push_back(0);
    if (ed.v == y.vertex()) out.push_back(ed.length);
  } else if (y.edge() == e) {
    out.push_back(y.offset());
  }
  return out;
}

const Piece& piece_at(const std::vector<Piece>& pieces, const Rational& s, bool forward) {
  for (const auto& p : pieces)
    if (forward ? (p.s0 <= s && s < p.s1) : (p.s0 < s && s <= p.s1)) return p;
  throw GraphError("no piece at offset " + s.str());
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction and evaluation

GraphMap GraphMap::build(MetricGraph source, MetricGraph target, std::vector<VertexId> vertex_map,
                         std::vector<Walk> edge_walks) {
  if (vertex_map.size() != source.vertex_count()) throw GraphError("vertex map does not cover the source");
  if (edge_walks.size() != source.edge_count()) throw GraphError("edge map does not cover the source");
  for (const auto& v : vertex_map)
    if (v.value >= target.vertex_count()) throw GraphError("vertex image outside the target");

  GraphMap f;
  for (std::size_t i = 0; i < source.edge_count(); ++i) {
    const Edge& ed = source.edges()[i];
    const Walk& w = edge_walks[i];
    validate_walk(target, w);
    if (w.start != GraphPoint::at_vertex(vertex_map[ed.u.value]))
      throw GraphError("image of edge " + ed.name + " does not start at the image of " + source.vertex_name(ed.u));
    if (walk_end(target, w) != GraphPoint::at_vertex(vertex_map[ed.v.value]))
      throw GraphError("image of edge " + ed.name + " does not end at the image of " + source.vertex_name(ed.v));

    Rational total = 0;
    for (const auto& s : w.segments) total += s.length();
    const Rational speed = total / ed.length;
    std::vector<Piece> pieces;
    Rational s = 0;
    for (const auto& seg : w.segments) {
      if (seg.from == seg.to) continue;
      const Rational next = s + seg.length() / speed;
      pieces.push_back(Piece{s, next, seg.edge, seg.from, seg.to});
      s = next;
    }
    if (!pieces.empty()) pieces.back().s1 = ed.length;  // exact already; keeps the invariant explicit
    f.speeds_.push_back(speed);
    f.pieces_.push_back(std::move(pieces));
  }
  f.source_ = std::move(source);
  f.target_ = std::move(target);
  f.vertex_map_ = std::move(vertex_map);
  f.edge_walks_ = std::move(edge_walks);
  return f;
}

Rational GraphMap::max_speed() const {
  Rational m = 0;
  for (const auto& s : speeds_) m = max(m, s);
  return m;
}

Rational GraphMap::min_speed() const {
  if (speeds_.empty()) return 0;
  Rational m = speeds_.front();
  for (const auto& s : speeds_) m = min(m, s);
  return m;
}

GraphPoint GraphMap::eval(const GraphPoint& p) const {
  source_.validate(p);
  if (p.is_vertex()) return GraphPoint::at_vertex(vertex_image(p.vertex()));
  const auto& ps = pieces_[p.edge().value];
  if (ps.empty()) return edge_walks_[p.edge().value].start;
  const Piece& piece = piece_at(ps, p.offset(), true);
  return target_.point(piece.target, piece.target_at(p.offset()));
}

GraphMap build_map(const MetricGraph& x, const MetricGraph& y, const MapSpec& spec) {
  std::vector<std::optional<VertexId>> vmap(x.vertex_count());
  for (const auto& [from, to] : spec.vertex_map) {
    auto& slot = vmap[x.vertex_by_name(from).value];
    if (slot) throw GraphError("vertex " + from + " assigned twice");
    slot = y.vertex_by_name(to);
  }
  std::vector<VertexId> vertex_map;
  for (std::size_t v = 0; v < vmap.size(); ++v) {
    if (!vmap[v]) throw GraphError("vertex " + x.vertex_name(vid(v)) + " has no image");
    vertex_map.push_back(*vmap[v]);
  }
  std::vector<std::optional<Walk>> walks(x.edge_count());
  for (const auto& [name, steps] : spec.edge_map) {
    const EdgeId e = x.edge_by_name(name);
    if (walks[e.value]) throw GraphError("edge " + name + " assigned twice");
    Walk w{GraphPoint::at_vertex(vertex_map[x.edge(e).u.value]), {}};
    for (const auto& [tname, forward] : steps) {
      const EdgeId te = y.edge_by_name(tname);
      const Rational& len = y.edge(te).length;
      w.segments.push_back(forward ? Segment{te, 0, len} : Segment{te, len, 0});
    }
    walks[e.value] = std::move(w);
  }
  std::vector<Walk> edge_walks;
  for (std::size_t e = 0; e < walks.size(); ++e) {
    if (!walks[e]) throw GraphError("edge " + x.edges()[e].name + " has no image");
    edge_walks.push_back(std::move(*walks[e]));
  }
  return GraphMap::build(x, y, std::move(vertex_map), std::move(edge_walks));
}

GraphMap identity_map(const MetricGraph& g) {
  std::vector<VertexId> vmap;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) vmap.push_back(vid(v));
  std::vector<Walk> walks;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[e];
    walks.push_back(Walk{GraphPoint::at_vertex(ed.u), {Segment{eid(e), 0, ed.length}}});
  }
  return GraphMap::build(g, g, std::move(vmap), std::move(walks));
}

Walk image_walk(const GraphMap& f, const Walk& w) {
  validate_walk(f.source(), w);
  Walk out{f.eval(w.start), {}};
  for (const auto& seg : w.segments) {
    if (seg.from == seg.to) continue;
    const auto& ps = f.pieces(seg.edge);
    const Rational lo = min(seg.from, seg.to), hi = max(seg.from, seg.to);
    std::vector<Segment> parts;
    for (const auto& p : ps) {
      const Rational a = max(lo, p.s0), b = min(hi, p.s1);
      if (a >= b) continue;
      parts.push_back(Segment{p.target, p.target_at(a), p.target_at(b)});
    }
    if (!seg.forward()) {
      std::reverse(parts.begin(), parts.end());
      for (auto& s : parts) std::swap(s.from, s.to);
    }
    out.segments.insert(out.segments.end(), parts.begin(), parts.end());
  }
  return out;
}

Region image_region(const GraphMap& f, const Region& a) {
  const MetricGraph& x = f.source();
  const MetricGraph& y = f.target();
  Region out(y);
  for (std::size_t v = 0; v < x.vertex_count(); ++v)
    if (a.has_vertex(vid(v))) out.add_vertex(f.vertex_image(vid(v)));
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    const IntervalSet on = a.on_closed_edge(x, eid(e));
    if (on.empty()) continue;
    if (f.collapsed(eid(e))) {
      out.add_point(y, f.edge_walk(eid(e)).start);
      continue;
    }
    for (const auto& p : f.pieces(eid(e))) add_set(out, y, p.target, push_forward(p, on));
  }
  return out;
}

Region preimage_region(const GraphMap& f, const Region& b) {
  const MetricGraph& x = f.source();
  const MetricGraph& y = f.target();
  Region out(x);
  for (std::size_t v = 0; v < x.vertex_count(); ++v)
    if (b.has_vertex(f.vertex_image(vid(v)))) out.add_vertex(vid(v));
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    const Edge& ed = x.edges()[e];
    if (f.collapsed(eid(e))) {
      if (b.contains(f.edge_walk(eid(e)).start)) out.add_edge_interval(x, eid(e), 0, ed.length, true, true);
      continue;
    }
    for (const auto& p : f.pieces(eid(e))) add_set(out, x, eid(e), pull_back(p, b.on_closed_edge(y, p.target)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Local structure

DirectionProfile direction_profile(const GraphMap& f, const GraphPoint& p) {
  DirectionProfile prof{p, f.eval(p), {}};
  for (const Direction& d : f.source().directions_at(p)) {
    DirectionProfile::Entry entry{d, std::nullopt, f.speed(d.edge)};
    const auto& ps = f.pieces(d.edge);
    if (!ps.empty()) {
      const Piece* piece;
      if (p.is_vertex()) {
        piece = d.forward ? &ps.front() : &ps.back();
      } else {
        piece = &piece_at(ps, p.offset(), d.forward);
      }
      entry.image = Direction{piece->target, d.forward == piece->increasing()};
    }
    prof.entries.push_back(entry);
  }
  return prof;
}

std::vector<GraphPoint> breakpoints(const GraphMap& f) {
  const MetricGraph& x = f.source();
  std::vector<GraphPoint> out;
  for (std::size_t v = 0; v < x.vertex_count(); ++v) out.push_back(GraphPoint::at_vertex(vid(v)));
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    const auto& ps = f.pieces(eid(e));
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) out.push_back(x.point(eid(e), ps[i].s1));
  }
  sort_unique(out);
  return out;
}

std::vector<GraphPoint> candidate_centers(const GraphMap& f) {
  const MetricGraph& x = f.source();
  std::vector<GraphPoint> out = breakpoints(f);
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    if (f.collapsed(eid(e))) {
      out.push_back(x.point(eid(e), x.edges()[e].length / 2));
      continue;
    }
    for (const auto& p : f.pieces(eid(e))) out.push_back(x.point(eid(e), (p.s0 + p.s1) / 2));
  }
  sort_unique(out);
  return out;
}

TopologyVerdict is_discrete(const GraphMap& f) {
  const MetricGraph& x = f.source();
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    if (!f.collapsed(eid(e))) continue;
    TopologyVerdict v{false, x.point(eid(e), x.edges()[e].length / 2), eid(e), std::nullopt, {}};
    v.detail = "edge " + x.edges()[e].name + " collapses to " + describe(f.target(), f.edge_walk(eid(e)).start);
    return v;
  }
  return {};
}

TopologyVerdict is_open(const GraphMap& f) {
  const MetricGraph& x = f.source();
  const MetricGraph& y = f.target();
  auto check = [&](const GraphPoint& p) -> std::optional<TopologyVerdict> {
    const DirectionProfile prof = direction_profile(f, p);
    std::set<Direction> covered;
    for (const auto& e : prof.entries)
      if (e.image) covered.insert(*e.image);
    for (const Direction& d : y.directions_at(prof.image_point)) {
      if (covered.count(d)) continue;
      TopologyVerdict v{false, p, std::nullopt, d, {}};
      v.detail = "direction " + y.edge(d.edge).name + (d.forward ? "+" : "-") + " at " +
                 describe(y, prof.image_point) + " is not covered near " + describe(x, p);
      return v;
    }
    return std::nullopt;
  };
  for (const auto& p : breakpoints(f))
    if (auto v = check(p)) return *v;
  for (std::size_t e = 0; e < x.edge_count(); ++e)
    if (f.collapsed(eid(e)))
      if (auto v = check(x.point(eid(e), x.edges()[e].length / 2))) return *v;
  return {};
}

bool is_branched_cover(const GraphMap& f) { return is_discrete(f).holds && is_open(f).holds; }

std::vector<GraphPoint> branch_set(const GraphMap& f) {
  if (!is_branched_cover(f)) throw PreconditionError("branch set requires a branched cover");
  std::vector<GraphPoint> out;
  for (const auto& p : breakpoints(f)) {
    const auto prof = direction_profile(f, p);
    std::set<Direction> seen;
    for (const auto& e : prof.entries)
      if (e.image && !seen.insert(*e.image).second) {
        out.push_back(p);
        break;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fibers

Fiber fiber(const GraphMap& f, const GraphPoint& y) {
  const MetricGraph& x = f.source();
  f.target().validate(y);
  Fiber out{y, {}, Region(x), true};
  for (std::size_t v = 0; v < x.vertex_count(); ++v)
    if (GraphPoint::at_vertex(f.vertex_image(vid(v))) == y) out.points.push_back(GraphPoint::at_vertex(vid(v)));
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    if (f.collapsed(eid(e))) {
      if (f.edge_walk(eid(e)).start == y) {
        out.discrete = false;
        out.region.add_edge_interval(x, eid(e), 0, x.edges()[e].length, true, true);
      }
      continue;
    }
    for (const auto& p : f.pieces(eid(e)))
      for (const auto& a : offsets_of(f.target(), p.target, y))
        if (a >= min(p.a0, p.a1) && a <= max(p.a0, p.a1)) out.points.push_back(x.point(eid(e), p.source_at(a)));
  }
  sort_unique(out.points);
  out.region = out.region.unite(Region::of_points(x, out.points));
  return out;
}

std::optional<std::size_t> multiplicity(const GraphMap& f, const GraphPoint& y, const Region& a) {
  const MetricGraph& x = f.source();
  const Region hit = fiber(f, y).region.intersect(a);
  std::size_t n = 0;
  for (std::size_t v = 0; v < x.vertex_count(); ++v) n += hit.has_vertex(vid(v));
  for (std::size_t e = 0; e < x.edge_count(); ++e)
    for (const auto& part : hit.on_edge(eid(e)).parts()) {
      if (!part.is_point()) return std::nullopt;
      ++n;
    }
  return n;
}

std::optional<std::size_t> max_multiplicity(const GraphMap& f, const Region& a) {
  const MetricGraph& x = f.source();
  const MetricGraph& y = f.target();
  std::vector<GraphPoint> ys;
  for (std::size_t v = 0; v < y.vertex_count(); ++v) ys.push_back(GraphPoint::at_vertex(vid(v)));
  // Cut every target edge where the count can change: piece ends and images
  // of the endpoints of A; sample each cut and each gap between cuts.
  std::vector<std::vector<Rational>> cuts(y.edge_count());
  for (std::size_t e = 0; e < y.edge_count(); ++e) cuts[e] = {Rational(0), y.edges()[e].length};
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    const IntervalSet on = a.on_closed_edge(x, eid(e));
    if (f.collapsed(eid(e))) {
      if (!on.empty()) return std::nullopt;
      continue;
    }
    for (const auto& p : f.pieces(eid(e))) {
      cuts[p.target.value].push_back(p.a0);
      cuts[p.target.value].push_back(p.a1);
      for (const auto& t : on.endpoints())
        if (t >= p.s0 && t <= p.s1) cuts[p.target.value].push_back(p.target_at(t));
    }
  }
  for (std::size_t e = 0; e < y.edge_count(); ++e) {
    auto& c = cuts[e];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] > 0 && c[i] < y.edges()[e].length) ys.push_back(y.point(eid(e), c[i]));
      if (i + 1 < c.size()) ys.push_back(y.point(eid(e), (c[i] + c[i + 1]) / 2));
    }
  }
  std::size_t best = 0;
  for (const auto& q : ys) {
    auto m = multiplicity(f, q, a);
    if (!m) return std::nullopt;
    best = std::max(best, *m);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Normal domains

Region u_component(const GraphMap& f, const GraphPoint& x, const Rational& r) {
  f.source().validate(x);
  const Region pre = preimage_region(f, ball(f.target(), f.eval(x), r, BallKind::Open));
  for (auto& c : components(f.source(), pre))
    if (c.contains(x)) return c;
  throw GraphError("center missing from its own preimage component");
}

namespace {

void require_domain(const GraphMap& f, const Region& u) {
  if (!u.is_open(f.source())) throw PreconditionError("region is not open");
  if (components(f.source(), u).size() != 1) throw PreconditionError("region is not connected");
}

bool normal_domain_unchecked(const GraphMap& f, const Region& u) {
  std::vector<GraphPoint> image_of_boundary;
  for (const auto& p : boundary(f.source(), u)) image_of_boundary.push_back(f.eval(p));
  sort_unique(image_of_boundary);
  return boundary(f.target(), image_region(f, u)) == image_of_boundary;
}

bool normal_neighbourhood_unchecked(const GraphMap& f, const Region& u, const GraphPoint& x) {
  if (!u.contains(x) || !normal_domain_unchecked(f, u)) return false;
  const Region hit = u.closure(f.source()).intersect(fiber(f, f.eval(x)).region);
  return hit == Region::of_points(f.source(), {x});
}

// Sorted positive radii at which U-type regions around y can change shape.
std::vector<Rational> radius_schedule(const GraphMap& f, const GraphPoint& y, const std::vector<GraphPoint>& extra) {
  std::vector<Rational> out = critical_radii(f.target(), y);
  for (const auto& q : breakpoints(f)) out.push_back(distance(f.target(), y, f.eval(q)));
  for (const auto& q : extra) out.push_back(distance(f.target(), y, f.eval(q)));
  std::erase_if(out, [](const Rational& r) { return r.sign() <= 0; });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Sup of the initial interval of radii on which `holds` is true, assuming
// the predicate is constant on each open gap of `schedule`.
template <class Pred>
Rational first_failure(const std::vector<Rational>& schedule, const Rational& cap, Pred holds) {
  Rational prev = 0;
  for (const auto& c : schedule) {
    if (!holds((prev + c) / 2)) return min(prev, cap);
    if (c >= cap) return cap;
    if (!holds(c)) return c;
    prev = c;
  }
  if (!holds(prev + 1)) return min(prev, cap);
  return cap;
}

}  // namespace

bool is_normal_domain(const GraphMap& f, const Region& u) {
  require_domain(f, u);
  return normal_domain_unchecked(f, u);
}

bool is_normal_neighbourhood(const GraphMap& f, const Region& u, const GraphPoint& x) {
  require_domain(f, u);
  return normal_neighbourhood_unchecked(f, u, x);
}

Rational max_normal_radius(const GraphMap& f, const GraphPoint& x) {
  if (!is_branched_cover(f)) throw PreconditionError("normal radius requires a branched cover");
  const GraphPoint fx = f.eval(x);
  const Rational cap = eccentricity(f.target(), fx);
  return first_failure(radius_schedule(f, fx, {}), cap, [&](const Rational& r) {
    return normal_neighbourhood_unchecked(f, u_component(f, x, r), x);
  });
}

NormalDecomposition normal_decomposition(const GraphMap& f, const Region& u, const GraphPoint& y) {
  if (!is_branched_cover(f)) throw PreconditionError("normal decomposition requires a branched cover");
  if (!is_normal_domain(f, u)) throw PreconditionError("region is not a normal domain");
  if (!image_region(f, u).contains(y)) throw PreconditionError("point is not in the image of the domain");
  const MetricGraph& x = f.source();

  NormalDecomposition out;
  for (const auto& z : fiber(f, y).points)
    if (u.contains(z)) out.centers.push_back(z);

  auto evaluate = [&](const Rational& r, NormalDecomposition& d) {
    d.parts.clear();
    const Region pre = u.intersect(preimage_region(f, ball(f.target(), y, r, BallKind::Open)));
    Region joined(x);
    d.disjoint = true;
    d.all_normal = true;
    for (const auto& z : d.centers) {
      Region part = u_component(f, z, r);
      if (!part.intersect(joined).empty()) d.disjoint = false;
      if (!normal_neighbourhood_unchecked(f, part, z)) d.all_normal = false;
      joined = joined.unite(part);
      d.parts.push_back(std::move(part));
    }
    d.union_matches = joined == pre;
    return d.disjoint && d.all_normal && d.union_matches;
  };

  const Rational cap = eccentricity(f.target(), y);
  out.radius_bound = first_failure(radius_schedule(f, y, boundary(x, u)), cap, [&](const Rational& r) {
    NormalDecomposition scratch = out;
    return evaluate(r, scratch);
  });
  out.witness_radius = out.radius_bound / 2;
  if (out.witness_radius.sign() > 0) evaluate(out.witness_radius, out);
  return out;
}

bool connected_preimage_check(const GraphMap& f, const GraphPoint& x, const Region& u, const Region& w) {
  if (!is_normal_neighbourhood(f, u, x)) throw PreconditionError("region is not a normal neighbourhood of the point");
  if (!w.is_open(f.target()) || components(f.target(), w).size() != 1)
    throw PreconditionError("target region is not a connected open set");
  if (!w.contains(f.eval(x)) || !w.is_subset_of(image_region(f, u)))
    throw PreconditionError("target region must contain f(x) and lie in f(U)");
  return components(f.source(), u.intersect(preimage_region(f, w))).size() == 1;
}

}  // namespace bldgraph
