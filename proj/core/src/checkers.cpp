#include "bldgraph/checkers.hpp"

#include "bldgraph/co_lipschitz.hpp"

#include <algorithm>
#include <array>

namespace bldgraph {

namespace {

EdgeId eid(std::size_t i) { return EdgeId{static_cast<std::uint32_t>(i)}; }

const std::array<std::pair<Property, std::string_view>, 6> kNames{{
    {Property::BLD, "bld"},
    {Property::LQ, "lq"},
    {Property::Radial, "radial"},
    {Property::RadialPointwise, "radial-pointwise"},
    {Property::Coradial, "coradial"},
    {Property::Lipschitz, "lipschitz"},
}};

void require_at_least_one(const Rational& L) {
  if (L < 1) throw PreconditionError("the constant L must be at least 1");
}

void require_cover(const GraphMap& f, Property p) {
  if (!is_branched_cover(f))
    throw PreconditionError(std::string(property_name(p)) + " is defined for branched covers only");
}

PropertyReport start(const GraphMap& f, Property p, const Rational& L) {
  PropertyReport r;
  r.property = p;
  r.L = L;
  r.topology = TopologyFlags::of(f);
  return r;
}

std::optional<Rational> first_positive(const std::vector<Rational>& radii) {
  for (const auto& r : radii)
    if (r.sign() > 0) return r;
  return std::nullopt;
}

std::optional<Rational> opt_min(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) return b;
  if (!b) return a;
  return min(*a, *b);
}

// Point at distance h from p along direction d (h small enough to stay on the edge).
GraphPoint step(const MetricGraph& g, const GraphPoint& p, const Direction& d, const Rational& h) {
  const Rational base = p.is_vertex() ? (d.forward ? Rational(0) : g.edge(d.edge).length) : p.offset();
  return g.point(d.edge, d.forward ? base + h : base - h);
}

/// Star radii at a center: below `r0` every ball around x, every target ball
/// around f(x) of radius up to `speed * r0`, and every U-component are stars
/// whose arms grow linearly.
struct LocalFrame {
  GraphPoint x;
  GraphPoint fx;
  DirectionProfile profile;
  std::optional<Rational> source_star;  // nullopt = infinite
  std::optional<Rational> target_star;
  Rational max_speed = 0;
  std::optional<Rational> min_speed;    // nullopt when x has no directions
};

class Frames {
 public:
  explicit Frames(const GraphMap& f) : f_(f), breaks_(breakpoints(f)) {}

  LocalFrame at(const GraphPoint& x) const {
    LocalFrame fr{x, f_.eval(x), direction_profile(f_, x), std::nullopt, std::nullopt, 0, std::nullopt};
    fr.source_star = first_positive(critical_radii(f_.source(), x));
    for (const auto& b : breaks_) {
      if (b == x) continue;
      fr.source_star = opt_min(fr.source_star, distance(f_.source(), x, b));
    }
    fr.target_star = first_positive(critical_radii(f_.target(), fr.fx));
    for (const auto& e : fr.profile.entries) {
      fr.max_speed = max(fr.max_speed, e.speed);
      fr.min_speed = opt_min(fr.min_speed, e.speed);
    }
    return fr;
  }

 private:
  const GraphMap& f_;
  std::vector<GraphPoint> breaks_;
};

// Radius below which f is a linear star map at x: arms of X stay inside the
// source star and their images inside the target star.
Rational star_radius(const LocalFrame& fr) {
  std::optional<Rational> r0 = fr.source_star;
  if (fr.target_star) r0 = opt_min(r0, *fr.target_star / max(Rational(1), fr.max_speed));
  return r0.value_or(Rational(1));
}

std::string ratio_text(const std::string& lhs, const Rational& a, const std::string& op, const std::string& rhs,
                       const Rational& b) {
  return lhs + " = " + a.str() + " " + op + " " + rhs + " = " + b.str();
}

/// Constant of the radial condition at one center; nullopt when a direction collapses.
std::optional<Rational> radial_constant_at(const LocalFrame& fr) {
  if (!fr.min_speed) return Rational(1);
  if (fr.min_speed->is_zero()) return std::nullopt;
  return max(Rational(1), max(fr.max_speed, 1 / *fr.min_speed));
}

}  // namespace

std::string_view property_name(Property p) {
  for (const auto& [q, n] : kNames)
    if (q == p) return n;
  return "?";
}

std::optional<Property> parse_property(std::string_view name) {
  for (const auto& [q, n] : kNames)
    if (n == name) return q;
  return std::nullopt;
}

TopologyFlags TopologyFlags::of(const GraphMap& f) {
  TopologyFlags t;
  t.open = is_open(f).holds;
  t.discrete = is_discrete(f).holds;
  t.branched_cover = t.open && t.discrete;
  return t;
}

LocalIndices local_indices(const GraphMap& f, const GraphPoint& x, const Rational& r) {
  if (r.sign() <= 0) throw PreconditionError("local indices need a positive radius");
  const GraphPoint fx = f.eval(x);
  LocalIndices li{x, r, 0, std::nullopt, 0, std::nullopt};
  for (const auto& y : sphere(f.source(), x, r)) {
    const Rational d = distance(f.target(), fx, f.eval(y));
    li.L = max(li.L, d);
    li.l = opt_min(li.l, d);
  }
  for (const auto& y : boundary(f.source(), u_component(f, x, r))) {
    const Rational d = distance(f.source(), x, y);
    li.L_star = max(li.L_star, d);
    li.l_star = opt_min(li.l_star, d);
  }
  return li;
}

// ---------------------------------------------------------------------------

Rational min_bld_constant(const GraphMap& f) {
  require_cover(f, Property::BLD);
  Rational c = 1;
  for (std::size_t e = 0; e < f.source().edge_count(); ++e) {
    const Rational& s = f.speed(eid(e));
    c = max(c, max(s, 1 / s));
  }
  return c;
}

PropertyReport check_bld(const GraphMap& f, const Rational& L) {
  require_at_least_one(L);
  PropertyReport rep = start(f, Property::BLD, L);
  if (!rep.topology.branched_cover) {
    const TopologyVerdict v = rep.topology.open ? is_discrete(f) : is_open(f);
    rep.witness = Witness{v.point.value_or(GraphPoint{}), std::nullopt, std::nullopt,
                          (rep.topology.open ? "not discrete: " : "not open: ") + v.detail};
    return rep;
  }
  rep.minimal = min_bld_constant(f);
  rep.verdict = true;
  const MetricGraph& x = f.source();
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    const Rational& s = f.speed(eid(e));
    if (s <= L && s * L >= 1) continue;
    // A walk along the edge is stretched by exactly its speed.
    const Rational len = x.edges()[e].length;
    rep.verdict = false;
    rep.witness = Witness{x.point(eid(e), len / 2), len, std::nullopt,
                          s > L ? ratio_text("l(f∘w)", s * len, ">", "L·l(w)", L * len)
                                : ratio_text("l(f∘w)", s * len, "<", "l(w)/L", len / L)};
    break;
  }
  return rep;
}

PropertyReport check_lipschitz(const GraphMap& f, const Rational& L) {
  if (L.sign() < 0) throw PreconditionError("a Lipschitz constant is non-negative");
  PropertyReport rep = start(f, Property::Lipschitz, L);
  rep.minimal = f.max_speed();
  rep.verdict = true;
  const MetricGraph& x = f.source();
  const MetricGraph& y = f.target();
  for (std::size_t e = 0; e < x.edge_count() && rep.verdict; ++e) {
    if (f.speed(eid(e)) <= L) continue;
    const Piece& p = f.pieces(eid(e)).front();
    const GraphPoint a = x.point(eid(e), (p.s0 + p.s1) / 2);
    for (Rational h = (p.s1 - p.s0) / 4;; h /= 2) {
      const GraphPoint b = x.point(eid(e), (p.s0 + p.s1) / 2 + h);
      const Rational dx = distance(x, a, b), dy = distance(y, f.eval(a), f.eval(b));
      if (dy > L * dx) {
        rep.verdict = false;
        rep.witness = Witness{a, dx, b, ratio_text("d(f(x),f(y))", dy, ">", "L·d(x,y)", L * dx)};
        break;
      }
    }
  }
  // Vertex pairs, as an independent confirmation of the speed bound.
  for (std::size_t i = 0; i < x.vertex_count() && rep.verdict; ++i)
    for (std::size_t j = i + 1; j < x.vertex_count(); ++j) {
      const VertexId u{static_cast<std::uint32_t>(i)}, v{static_cast<std::uint32_t>(j)};
      const Rational dx = x.vertex_distance(u, v), dy = y.vertex_distance(f.vertex_image(u), f.vertex_image(v));
      if (dy > L * dx) {
        rep.verdict = false;
        rep.witness = Witness{GraphPoint::at_vertex(u), dx, GraphPoint::at_vertex(v),
                              ratio_text("d(f(x),f(y))", dy, ">", "L·d(x,y)", L * dx)};
        break;
      }
    }
  return rep;
}

PropertyReport check_lq(const GraphMap& f, const Rational& L) {
  require_at_least_one(L);
  PropertyReport rep = start(f, Property::LQ, L);
  const CoLipschitzSup sup = co_lipschitz_sup(f);
  if (sup.value) rep.minimal = max(Rational(1), max(f.max_speed(), *sup.value));

  // Right inclusion: f(B(x, r)) ⊆ B(f(x), Lr) is the Lipschitz bound.
  const PropertyReport lip = check_lipschitz(f, L);
  if (!lip.verdict) {
    const Witness& w = *lip.witness;
    const Rational dy = distance(f.target(), f.eval(w.center), f.eval(*w.point));
    const Rational r = (*w.radius + dy / L) / 2;  // d(x, y) < r and L·r < d(f(x), f(y))
    rep.witness = Witness{w.center, r, w.point,
                          "f(B(x,r)) ⊄ B(f(x),L·r): d(f(x),f(y)) = " + dy.str() + " >= L·r = " + (L * r).str()};
    return rep;
  }

  // Left inclusion: B(f(x), r/L) ⊆ f(B(x, r)) for all x, r.
  const auto w = co_lipschitz_witness(f, L);
  if (!w) {
    rep.verdict = true;
    return rep;
  }
  const Rational r = w->rho ? *w->rho : L * w->dist + 1;
  // Confirm with the region primitives: z is in the small target ball but
  // outside the image of the source ball.
  const Region img = image_region(f, ball(f.source(), w->x, r));
  const Region tb = ball(f.target(), f.eval(w->x), r / L);
  if (!tb.contains(w->z) || img.contains(w->z))
    throw GraphError("co-Lipschitz witness failed region confirmation");
  rep.witness = Witness{w->x, r, w->z,
                        "B(f(x),r/L) ⊄ f(B(x,r)): d(f(x),z) = " + w->dist.str() + " < r/L = " + (r / L).str() +
                            ", d(x,f⁻¹(z)) = " +(w->rho ? w->rho->str() : std::string("inf")) + " >= r",
                        true};
  return rep;
}

PropertyReport check_lq_local(const GraphMap& f, const Rational& L) {
  require_at_least_one(L);
  PropertyReport rep = start(f, Property::LQ, L);
  rep.verdict = true;
  const Frames frames(f);
  for (const auto& x : candidate_centers(f)) {
    const LocalFrame fr = frames.at(x);
    const Rational r0 = star_radius(fr);
    rep.r0 = opt_min(rep.r0, r0);
    const Rational r = r0 / 2;
    const Region img = image_region(f, ball(f.source(), x, r));
    const Region inner = ball(f.target(), fr.fx, r / L);
    const Region outer = ball(f.target(), fr.fx, L * r);
    if (!inner.is_subset_of(img)) {
      rep.verdict = false;
      rep.witness = Witness{x, r, std::nullopt, "B(f(x), r/L) ⊄ f(B(x, r)) for all small r"};
      return rep;
    }
    if (!img.is_subset_of(outer)) {
      rep.verdict = false;
      rep.witness = Witness{x, r, std::nullopt, "f(B(x, r)) ⊄ B(f(x), L·r) for all small r"};
      return rep;
    }
  }
  return rep;
}

PropertyReport check_radial(const GraphMap& f, const Rational& L) {
  require_at_least_one(L);
  PropertyReport rep = start(f, Property::Radial, L);
  rep.verdict = true;
  std::optional<Rational> worst = Rational(1);
  const Frames frames(f);
  for (const auto& x : candidate_centers(f)) {
    const LocalFrame fr = frames.at(x);
    const Rational r0 = star_radius(fr);
    rep.r0 = opt_min(rep.r0, r0);
    const auto c = radial_constant_at(fr);
    if (worst) worst = c ? std::optional(max(*worst, *c)) : std::nullopt;
    if (!rep.verdict) continue;
    for (const auto& e : fr.profile.entries) {
      if (e.speed <= L && e.speed * L >= 1) continue;
      const Rational r = r0 / 2;
      rep.verdict = false;
      rep.witness = Witness{x, r, step(f.source(), x, e.source, r),
                            e.speed > L ? ratio_text("L(x,f,r)/r", e.speed, ">", "L", L)
                                        : ratio_text("l(x,f,r)/r", e.speed, "<", "1/L", 1 / L)};
      break;
    }
  }
  rep.minimal = worst;
  return rep;
}

PropertyReport check_radial_pointwise(const GraphMap& f, const Rational& L) {
  require_at_least_one(L);
  PropertyReport rep = start(f, Property::RadialPointwise, L);
  rep.verdict = true;
  std::optional<Rational> worst = Rational(1);
  const Frames frames(f);
  for (const auto& x : candidate_centers(f)) {
    const LocalFrame fr = frames.at(x);
    const Rational r0 = star_radius(fr);
    rep.r0 = opt_min(rep.r0, r0);
    // In the star every distance is linear in d(x, y); one sphere suffices.
    const Rational r = r0 / 2;
    for (const auto& y : sphere(f.source(), x, r)) {
      const Rational q = distance(f.target(), fr.fx, f.eval(y)) / r;
      if (worst) worst = q.is_zero() ? std::nullopt : std::optional(max(*worst, max(q, 1 / q)));
      if (rep.verdict && (q > L || q * L < 1)) {
        rep.verdict = false;
        rep.witness = Witness{x, r, y,
                              q > L ? ratio_text("d(f(x),f(y))", q * r, ">", "L·d(x,y)", L * r)
                                    : ratio_text("d(f(x),f(y))", q * r, "<", "d(x,y)/L", r / L)};
      }
    }
  }
  rep.minimal = worst;
  return rep;
}

PropertyReport check_coradial(const GraphMap& f, const Rational& L) {
  require_at_least_one(L);
  require_cover(f, Property::Coradial);
  PropertyReport rep = start(f, Property::Coradial, L);
  rep.verdict = true;
  Rational worst = 1;
  const Frames frames(f);
  for (const auto& x : candidate_centers(f)) {
    const LocalFrame fr = frames.at(x);
    if (!fr.min_speed) continue;
    std::optional<Rational> r0 = fr.target_star;
    if (fr.source_star) r0 = opt_min(r0, *fr.source_star * *fr.min_speed);
    const Rational r = r0.value_or(Rational(1)) / 2;
    rep.r0 = opt_min(rep.r0, r0.value_or(Rational(1)));
    const LocalIndices li = local_indices(f, x, r);
    worst = max(worst, li.L_star / r);
    if (li.l_star) worst = max(worst, r / *li.l_star);
    if (!rep.verdict) continue;
    if (li.L_star > L * r) {
      rep.verdict = false;
      rep.witness = Witness{x, r, std::nullopt, ratio_text("L*(x,f,r)", li.L_star, ">", "L·r", L * r)};
    } else if (li.l_star && *li.l_star * L < r) {
      rep.verdict = false;
      rep.witness = Witness{x, r, std::nullopt, ratio_text("l*(x,f,r)", *li.l_star, "<", "r/L", r / L)};
    }
  }
  rep.minimal = worst;
  return rep;
}

PropertyReport check(const GraphMap& f, Property p, const Rational& L) {
  switch (p) {
    case Property::BLD: return check_bld(f, L);
    case Property::LQ: return check_lq(f, L);
    case Property::Radial: return check_radial(f, L);
    case Property::RadialPointwise: return check_radial_pointwise(f, L);
    case Property::Coradial: return check_coradial(f, L);
    case Property::Lipschitz: return check_lipschitz(f, L);
  }
  throw PreconditionError("unknown property");
}

std::optional<Rational> min_constant(const GraphMap& f, Property p) {
  switch (p) {
    case Property::BLD: return min_bld_constant(f);
    case Property::Lipschitz: return f.max_speed();
    case Property::LQ: {
      const CoLipschitzSup sup = co_lipschitz_sup(f);
      if (!sup.value) return std::nullopt;
      return max(Rational(1), max(f.max_speed(), *sup.value));
    }
    case Property::Radial: return check_radial(f, 1).minimal;
    case Property::RadialPointwise: return check_radial_pointwise(f, 1).minimal;
    case Property::Coradial: return check_coradial(f, 1).minimal;
  }
  throw PreconditionError("unknown property");
}

Characterization characterize(const GraphMap& f) {
  Characterization c;
  c.open = is_open(f);
  c.discrete = is_discrete(f);
  c.branched_cover = c.open.holds && c.discrete.holds;
  c.lipschitz = f.max_speed();
  c.lq = min_constant(f, Property::LQ);
  c.radial = min_constant(f, Property::Radial);
  if (c.branched_cover) {
    c.bld_applies = c.coradial_applies = true;
    c.bld = min_constant(f, Property::BLD);
    c.coradial = min_constant(f, Property::Coradial);
    c.equivalence_certified = c.bld && c.lq && c.radial && c.coradial && *c.bld == *c.lq && *c.lq == *c.radial &&
                              *c.radial == *c.coradial;
    if (!c.equivalence_certified) c.notes.push_back("minimal constants of a branched cover disagree");
  } else {
    if (!c.open.holds) c.notes.push_back("not open (" + c.open.detail + "): BLD and coradial do not apply");
    if (!c.discrete.holds)
      c.notes.push_back("not discrete (" + c.discrete.detail + "): BLD and coradial do not apply");
    if (c.radial) c.notes.push_back("radial holds with constant " + c.radial->str());
    if (c.lq) c.notes.push_back("LQ holds with constant " + c.lq->str());
  }
  return c;
}

}  // namespace bldgraph
