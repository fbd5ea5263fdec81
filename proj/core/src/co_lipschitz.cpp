#include "bldgraph/co_lipschitz.hpp"

#include <algorithm>

namespace bldgraph {

namespace {

EdgeId eid(std::size_t i) { return EdgeId{static_cast<std::uint32_t>(i)}; }

struct Pt {
  Rational s, t;
  friend bool operator==(const Pt&, const Pt&) = default;
};

/// a*s + b*t + c
struct Form {
  Rational a, b, c;
  Rational at(const Pt& p) const { return a * p.s + b * p.t + c; }
  Form operator-(const Form& o) const { return {a - o.a, b - o.b, c - o.c}; }
  friend bool operator==(const Form&, const Form&) = default;
};

using Poly = std::vector<Pt>;

Rational twice_area(const Poly& p) {
  Rational a = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Pt& u = p[i];
    const Pt& v = p[(i + 1) % p.size()];
    a += u.s * v.t - v.s * u.t;
  }
  return a;
}

bool degenerate(const Poly& p) { return p.size() < 3 || twice_area(p).is_zero(); }

/// Part of a convex polygon where F >= 0 (Sutherland-Hodgman, one plane).
Poly clip(const Poly& poly, const Form& f) {
  Poly out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Pt& p = poly[i];
    const Pt& q = poly[(i + 1) % poly.size()];
    const Rational fp = f.at(p), fq = f.at(q);
    if (fp.sign() >= 0) out.push_back(p);
    if (fp.sign() * fq.sign() < 0) {
      const Rational lam = fp / (fp - fq);
      out.push_back(Pt{p.s + (q.s - p.s) * lam, p.t + (q.t - p.t) * lam});
    }
  }
  Poly dedup;
  for (const auto& p : out)
    if (dedup.empty() || !(dedup.back() == p)) dedup.push_back(p);
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  return dedup;
}

Pt centroid(const Poly& p) {
  Rational s = 0, t = 0;
  for (const auto& v : p) {
    s += v.s;
    t += v.t;
  }
  const Rational n(static_cast<long>(p.size()));
  return {s / n, t / n};
}

/// Drops duplicate forms and forms that dominate another one on the polygon.
std::vector<Form> prune(std::vector<Form> forms, const Poly& poly) {
  std::vector<Form> kept;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < forms.size() && !drop; ++j) {
      if (i == j) continue;
      bool ge = true, eq = true;
      for (const auto& v : poly) {
        const Rational fi = forms[i].at(v), fj = forms[j].at(v);
        if (fi < fj) ge = false;
        if (fi != fj) eq = false;
      }
      // On ties keep the earlier form only.
      if (ge && (!eq || j < i)) drop = true;
    }
    if (!drop) kept.push_back(forms[i]);
  }
  return kept;
}

/// Polygons on which each form is the minimum.
std::vector<std::pair<std::size_t, Poly>> argmin_cells(const std::vector<Form>& forms, const Poly& poly) {
  std::vector<std::pair<std::size_t, Poly>> out;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    Poly p = poly;
    for (std::size_t k = 0; k < forms.size() && !degenerate(p); ++k)
      if (k != i) p = clip(p, forms[k] - forms[i]);
    if (!degenerate(p)) out.push_back({i, std::move(p)});
  }
  return out;
}

/// Parametrization of f on one source cell: f(e, s) sits on target edge
/// `te` at offset slope*s + icept.
struct SourceCell {
  EdgeId edge;
  Rational s0, s1;
  EdgeId te;
  Rational slope, icept;
};

struct Best {
  bool infinite = false;
  std::optional<Rational> ratio;  // finite maximum so far
  EdgeId xe, ze;
  Pt vertex, toward;
  bool found = false;
};

class Engine {
 public:
  explicit Engine(const GraphMap& f) : f_(f), x_(f.source()), y_(f.target()) {}

  Best run(std::size_t& cells, std::size_t& polys) {
    Best best;
    for (const SourceCell& sc : source_cells()) {
      for (std::size_t ez = 0; ez < y_.edge_count(); ++ez) {
        const auto slabs = target_slabs(eid(ez));
        for (const auto& [t0, t1, covering] : slabs) {
          ++cells;
          Poly rect{{sc.s0, t0}, {sc.s1, t0}, {sc.s1, t1}, {sc.s0, t1}};
          if (covering.empty()) {
            // Nothing maps onto this stretch of the target.
            note(best, sc.edge, eid(ez), rect[0], centroid(rect), std::nullopt);
            return best;
          }
          scan_cell(sc, eid(ez), covering, rect, best, polys);
          if (best.infinite) return best;
        }
      }
    }
    return best;
  }

 private:
  struct Slab {
    Rational t0, t1;
    std::vector<std::pair<EdgeId, Piece>> covering;
  };

  std::vector<SourceCell> source_cells() const {
    std::vector<SourceCell> out;
    for (std::size_t e = 0; e < x_.edge_count(); ++e) {
      const Edge& ed = x_.edges()[e];
      if (f_.collapsed(eid(e))) {
        const GraphPoint c = f_.edge_walk(eid(e)).start;
        const EdgeId te = c.is_vertex() ? anchor_edge(c.vertex()) : c.edge();
        out.push_back({eid(e), 0, ed.length, te, 0, y_.offset_on(te, c)});
        continue;
      }
      for (const auto& p : f_.pieces(eid(e))) {
        const Rational k = (p.a1 - p.a0) / (p.s1 - p.s0);
        out.push_back({eid(e), p.s0, p.s1, p.target, k, p.a0 - k * p.s0});
      }
    }
    return out;
  }

  EdgeId anchor_edge(VertexId v) const {
    const auto inc = y_.incident_edges(v);
    return inc.front();  // connected target with edges: never empty
  }

  std::vector<Slab> target_slabs(EdgeId ez) const {
    std::vector<Rational> cuts{0, y_.edge(ez).length};
    std::vector<std::pair<EdgeId, Piece>> on_edge;
    for (std::size_t e = 0; e < x_.edge_count(); ++e)
      for (const auto& p : f_.pieces(eid(e)))
        if (p.target == ez) {
          cuts.push_back(p.a0);
          cuts.push_back(p.a1);
          on_edge.push_back({eid(e), p});
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Slab> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Slab s{cuts[i], cuts[i + 1], {}};
      for (const auto& [e, p] : on_edge)
        if (min(p.a0, p.a1) <= s.t0 && max(p.a0, p.a1) >= s.t1) s.covering.push_back({e, p});
      out.push_back(std::move(s));
    }
    return out;
  }

  void note(Best& best, EdgeId xe, EdgeId ze, const Pt& v, const Pt& toward, const std::optional<Rational>& ratio) {
    if (best.infinite) return;
    if (!ratio) {
      best.infinite = true;
    } else if (best.ratio && *ratio <= *best.ratio) {
      return;
    } else {
      best.ratio = *ratio;
    }
    best.found = true;
    best.xe = xe;
    best.ze = ze;
    best.vertex = v;
    best.toward = toward;
  }

  void scan_cell(const SourceCell& sc, EdgeId ez, const std::vector<std::pair<EdgeId, Piece>>& covering,
                 const Poly& rect, Best& best, std::size_t& polys) {
    const Edge& xe = x_.edge(sc.edge);
    const Edge& te = y_.edge(sc.te);
    const Edge& ze = y_.edge(ez);

    // Lines along which |.| terms change sign.
    std::vector<Form> lines;
    const bool d_direct = sc.te == ez;
    if (d_direct) lines.push_back({sc.slope, -1, sc.icept});  // alpha(s) - t
    struct Fib {
      EdgeId edge;
      Rational k, m;  // fiber offset = k*t + m
      bool direct;
    };
    std::vector<Fib> fibs;
    for (const auto& [e2, p] : covering) {
      const Rational k = (p.s1 - p.s0) / (p.a1 - p.a0);
      Fib fb{e2, k, p.s0 - k * p.a0, e2 == sc.edge};
      if (fb.direct) lines.push_back({1, -fb.k, -fb.m});  // s - sigma(t)
      fibs.push_back(fb);
    }

    std::vector<Poly> pieces{rect};
    for (const auto& line : lines) {
      std::vector<Poly> next;
      for (const auto& p : pieces) {
        Poly a = clip(p, line), b = clip(p, Form{-line.a, -line.b, -line.c});
        if (!degenerate(a)) next.push_back(std::move(a));
        if (!degenerate(b)) next.push_back(std::move(b));
      }
      pieces = std::move(next);
    }

    for (const auto& poly : pieces) {
      ++polys;
      const Pt c = centroid(poly);
      auto dY = [&](VertexId a, VertexId b) { return y_.vertex_distance(a, b); };
      auto dX = [&](VertexId a, VertexId b) { return x_.vertex_distance(a, b); };

      // d(f(x), z)
      std::vector<Form> B;
      const Form alpha{sc.slope, 0, sc.icept};
      const Form beta{-sc.slope, 0, te.length - sc.icept};  // te.length - alpha
      for (const auto& [fx_part, fx_end] : {std::pair{alpha, te.u}, std::pair{beta, te.v}}) {
        B.push_back({fx_part.a, 1, fx_part.c + dY(fx_end, ze.u)});
        B.push_back({fx_part.a, -1, fx_part.c + dY(fx_end, ze.v) + ze.length});
      }
      if (d_direct) {
        const Form diff{sc.slope, -1, sc.icept};
        B.push_back(diff.at(c).sign() >= 0 ? diff : Form{-diff.a, -diff.b, -diff.c});
      }

      // d(x, f^{-1}(z))
      std::vector<Form> A;
      for (const auto& fb : fibs) {
        const Edge& e2 = x_.edge(fb.edge);
        A.push_back({1, fb.k, dX(xe.u, e2.u) + fb.m});
        A.push_back({1, -fb.k, dX(xe.u, e2.v) + e2.length - fb.m});
        A.push_back({-1, fb.k, xe.length + dX(xe.v, e2.u) + fb.m});
        A.push_back({-1, -fb.k, xe.length + dX(xe.v, e2.v) + e2.length - fb.m});
        if (fb.direct) {
          const Form diff{1, -fb.k, -fb.m};
          A.push_back(diff.at(c).sign() >= 0 ? diff : Form{-diff.a, -diff.b, -diff.c});
        }
      }

      A = prune(std::move(A), poly);
      B = prune(std::move(B), poly);
      for (const auto& [i, qa] : argmin_cells(A, poly)) {
        for (const auto& [j, qab] : argmin_cells_within(B, qa)) {
          const Pt toward = centroid(qab);
          for (const auto& v : qab) {
            const Rational av = A[i].at(v), bv = B[j].at(v);
            if (bv.sign() > 0) {
              note(best, sc.edge, ez, v, toward, av / bv);
            } else if (av.sign() > 0) {
              note(best, sc.edge, ez, v, toward, std::nullopt);
              return;
            }
          }
        }
      }
    }
  }

  static std::vector<std::pair<std::size_t, Poly>> argmin_cells_within(const std::vector<Form>& forms, const Poly& poly) {
    return argmin_cells(forms, poly);
  }

  const GraphMap& f_;
  const MetricGraph& x_;
  const MetricGraph& y_;
};

}  // namespace

std::optional<Rational> fiber_distance(const GraphMap& f, const GraphPoint& x, const GraphPoint& z) {
  const Fiber fb = fiber(f, z);
  const MetricGraph& g = f.source();
  const auto dx = distances_to_vertices(g, x);
  std::optional<Rational> best;
  auto offer = [&](const Rational& d) {
    if (!best || d < *best) best = d;
  };
  for (const auto& p : fb.points) offer(distance(g, x, p));
  if (!fb.discrete) {
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.edges()[e];
      if (!f.collapsed(eid(e)) || f.edge_walk(eid(e)).start != z) continue;
      offer(dx[ed.u.value]);
      offer(dx[ed.v.value]);
      if (!x.is_vertex() && x.edge() == eid(e)) offer(0);
    }
  }
  return best;
}

CoLipschitzSup co_lipschitz_sup(const GraphMap& f) {
  CoLipschitzSup out;
  const MetricGraph& x = f.source();
  const MetricGraph& y = f.target();
  if (y.edge_count() == 0) {
    out.value = Rational(0);  // z = f(x) always; no ratio to bound
    return out;
  }
  if (x.edge_count() == 0) {
    // One source point; every other target point has an empty fiber.
    out.x = GraphPoint::at_vertex(VertexId{0});
    out.z = y.point(EdgeId{0}, y.edge(EdgeId{0}).length / 2);
    return out;
  }
  Engine engine(f);
  const Best best = engine.run(out.cells, out.polygons);
  if (!best.infinite) out.value = best.ratio.value_or(Rational(0));
  if (best.found) {
    out.x = x.point(best.xe, best.vertex.s);
    out.z = y.point(best.ze, best.vertex.t);
  }
  return out;
}

std::optional<CoLipschitzWitness> co_lipschitz_witness(const GraphMap& f, const Rational& L) {
  const MetricGraph& x = f.source();
  const MetricGraph& y = f.target();
  if (y.edge_count() == 0) return std::nullopt;

  auto confirm = [&](const GraphPoint& px, const GraphPoint& pz) -> std::optional<CoLipschitzWitness> {
    const Rational d = distance(y, f.eval(px), pz);
    if (d.sign() == 0) return std::nullopt;
    const auto rho = fiber_distance(f, px, pz);
    if (!rho || *rho > L * d) return CoLipschitzWitness{px, pz, rho, d};
    return std::nullopt;
  };

  if (x.edge_count() == 0) {
    return confirm(GraphPoint::at_vertex(VertexId{0}), y.point(EdgeId{0}, y.edge(EdgeId{0}).length / 2));
  }
  Engine engine(f);
  std::size_t cells = 0, polys = 0;
  const Best best = engine.run(cells, polys);
  if (!best.found || (!best.infinite && *best.ratio <= L)) return std::nullopt;
  // Slide from the extremal vertex toward the interior of its polygon until
  // the exact primitives confirm the violation.
  Rational lam(1, 2);
  for (int i = 0; i < 200; ++i, lam /= 2) {
    const Pt p{best.vertex.s + (best.toward.s - best.vertex.s) * lam,
               best.vertex.t + (best.toward.t - best.vertex.t) * lam};
    if (auto w = confirm(x.point(best.xe, p.s), y.point(best.ze, p.t))) return w;
  }
  throw GraphError("co-Lipschitz witness could not be confirmed");
}

}  // namespace bldgraph
