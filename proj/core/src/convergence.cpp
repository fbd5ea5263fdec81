#include "bldgraph/convergence.hpp"

#include "bldgraph/fixtures.hpp"

#include <algorithm>
#include <set>

namespace bldgraph {

namespace {

EdgeId eid(std::size_t i) { return EdgeId{static_cast<std::uint32_t>(i)}; }

std::vector<std::vector<Rational>> distance_matrix(const MetricGraph& g, const std::vector<GraphPoint>& pts) {
  std::vector<std::vector<Rational>> d(pts.size(), std::vector<Rational>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d[i][j] = d[j][i] = distance(g, pts[i], pts[j]);
  return d;
}

Region neighbourhood(const MetricGraph& g, const std::vector<GraphPoint>& pts, const Rational& eps) {
  Region u(g);
  for (const auto& p : pts) u = u.unite(ball(g, p, eps));
  return u;
}

/// Index of the net point nearest to p; ties go to the earlier net point.
std::size_t nearest(const MetricGraph& g, const std::vector<GraphPoint>& net, const GraphPoint& p) {
  std::size_t best = 0;
  Rational bd = distance(g, p, net[0]);
  for (std::size_t i = 1; i < net.size(); ++i) {
    const Rational d = distance(g, p, net[i]);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

/// sup over y of min(d(y, S), r - d(y0, y)), where d(y, ∅) = +inf.
Rational coverage_slack(const MetricGraph& y, const GraphPoint& y0, const std::vector<GraphPoint>& imgs,
                        const Rational& r) {
  const auto d0 = distances_to_vertices(y, y0);
  std::vector<std::vector<Rational>> dq;
  for (const auto& q : imgs) dq.push_back(distances_to_vertices(y, q));

  auto value = [&](const GraphPoint& p, const std::optional<std::pair<EdgeId, Rational>>& on) {
    // Exact distances at p, from vertex distances when p is interior.
    auto dist = [&](const GraphPoint& q, const std::vector<Rational>& dv) {
      if (!on) return dv[p.vertex().value];
      const Edge& ed = y.edge(on->first);
      Rational d = min(dv[ed.u.value] + on->second, dv[ed.v.value] + ed.length - on->second);
      if (!q.is_vertex() && q.edge() == on->first) d = min(d, abs(on->second - q.offset()));
      return d;
    };
    const Rational reach = r - dist(y0, d0);
    if (imgs.empty()) return reach;
    Rational m = dist(imgs[0], dq[0]);
    for (std::size_t i = 1; i < imgs.size(); ++i) m = min(m, dist(imgs[i], dq[i]));
    return min(m, reach);
  };

  std::optional<Rational> best;
  auto offer = [&](const Rational& v) {
    if (!best || v > *best) best = v;
  };
  for (std::size_t v = 0; v < y.vertex_count(); ++v)
    offer(value(GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(v)}), std::nullopt));
  for (std::size_t e = 0; e < y.edge_count(); ++e) {
    const Edge& ed = y.edges()[e];
    // Every function involved has slope +1 or -1 on the edge; collect the
    // intercepts and the kinks, then evaluate at every crossing.
    std::set<Rational> plus, minus, kinks{Rational(0), ed.length};
    auto add_point = [&](const GraphPoint& q, const std::vector<Rational>& dv, bool reversed) {
      const Rational up = dv[ed.u.value], down = dv[ed.v.value] + ed.length;
      if (!reversed) {
        plus.insert(up);
        minus.insert(down);
      } else {
        minus.insert(r - up);
        plus.insert(r - down);
      }
      if (!q.is_vertex() && q.edge() == eid(e)) {
        kinks.insert(q.offset());
        if (!reversed) {
          plus.insert(-q.offset());
          minus.insert(q.offset());
        } else {
          plus.insert(r - q.offset());
          minus.insert(r + q.offset());
        }
      }
    };
    add_point(y0, d0, true);
    for (std::size_t i = 0; i < imgs.size(); ++i) add_point(imgs[i], dq[i], false);
    std::set<Rational> ts = kinks;
    for (const auto& cp : plus)
      for (const auto& cm : minus) {
        const Rational t = (cm - cp) / 2;
        if (t.sign() >= 0 && t <= ed.length) ts.insert(t);
      }
    for (const auto& t : ts) {
      if (t.sign() == 0 || t == ed.length) continue;  // vertices done above
      offer(value(GraphPoint::interior(eid(e), t), std::pair{eid(e), t}));
    }
  }
  return *best;
}

bool contains_canonical_net(const QuasiIsometryWitness& w) {
  const auto canonical = ball_net(w.source, witness_radius(w), w.delta);
  std::set<GraphPoint> have(w.net.begin(), w.net.end());
  return std::all_of(canonical.begin(), canonical.end(), [&](const GraphPoint& p) { return have.count(p) > 0; });
}

/// The verdict at tolerance `eps` using only the stored net; used both for the
/// check proper and for the ε scan.
QiVerdict evaluate(const QuasiIsometryWitness& w, const Rational& eps) {
  QiVerdict v;
  const MetricGraph& xg = w.source.graph;
  const MetricGraph& yg = w.target.graph;
  if (w.delta * 4 > eps) {
    v.violated = "net";
    v.detail = "net step " + w.delta.str() + " exceeds ε/4";
    return v;
  }
  Rational R = 1 / eps;
  if (w.domain_radius) R = min(R, *w.domain_radius);
  // The stored net must cover the ball; a larger ball than the one the
  // witness was built for is only covered when it already was the whole space.
  const Rational built = witness_radius(w);
  if (R > built && built <= eccentricity(xg, w.source.base)) {
    v.violated = "net";
    v.detail = "the witness net does not cover B(x0, " + R.str() + ")";
    return v;
  }
  if (w.net.empty() || w.net[0] != w.source.base || w.image[0] != w.target.base) {
    v.violated = "basepoint";
    v.detail = "φ(x0) must be y0";
    return v;
  }
  std::vector<std::size_t> idx;
  std::vector<Rational> dist0;
  for (std::size_t i = 0; i < w.net.size(); ++i) {
    const Rational d = distance(xg, w.source.base, w.net[i]);
    if (d < R) {
      idx.push_back(i);
      dist0.push_back(d);
    }
  }

  v.max_distortion = 0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const Rational dx = distance(xg, w.net[idx[a]], w.net[idx[b]]);
      const Rational dy = distance(yg, w.image[idx[a]], w.image[idx[b]]);
      const Rational dist = abs(dy - dx);
      if (dist > v.max_distortion || !v.pair) {
        v.max_distortion = dist;
        v.pair = std::pair{w.net[idx[a]], w.net[idx[b]]};
      }
    }
  if (v.max_distortion + 2 * w.delta >= eps) {
    v.violated = "distortion";
    v.detail = "|d(φa,φb) - d(a,b)| + 2δ = " + (v.max_distortion + 2 * w.delta).str() + " >= ε = " + eps.str();
    return v;
  }

  // Coverage at each net distance in [ε, R] and at R, growing the image set.
  std::vector<std::size_t> order(idx.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist0[a] < dist0[b]; });
  std::set<Rational> radii{R};
  for (const auto& d : dist0)
    if (d >= eps && d <= R) radii.insert(d);
  Region cover(yg);
  std::size_t next = 0;
  for (const auto& r : radii) {
    while (next < order.size() && dist0[order[next]] < r) {
      cover = cover.unite(ball(yg, w.image[idx[order[next]]], eps));
      ++next;
    }
    if (r <= eps) continue;
    if (!ball(yg, w.target.base, r - eps).is_subset_of(cover)) {
      v.violated = "coverage";
      v.radius = r;
      v.detail = "N_ε(φ(B(x0, " + r.str() + "))) misses part of B(y0, " + (r - eps).str() + ")";
      return v;
    }
  }
  v.passes = true;
  return v;
}

}  // namespace

PointedSpace pointed(const MetricGraph& g) {
  return PointedSpace{g, g.basepoint().value_or(GraphPoint::at_vertex(VertexId{0}))};
}

MappingPackage make_package(const GraphMap& f, const GraphPoint& x0) {
  return MappingPackage{{f.source(), x0}, {f.target(), f.eval(x0)}, f};
}

std::vector<GraphPoint> ball_net(const PointedSpace& s, const Rational& radius, const Rational& delta) {
  if (delta.sign() <= 0) throw PreconditionError("net step must be positive");
  // The vertices of subdivide(g, δ), without building the subdivided graph.
  const auto dv = distances_to_vertices(s.graph, s.base);
  std::vector<std::pair<Rational, GraphPoint>> pts;
  auto offer = [&](const GraphPoint& p, const Rational& d) {
    if (p != s.base && d < radius) pts.push_back({d, p});
  };
  for (std::size_t v = 0; v < s.graph.vertex_count(); ++v)
    offer(GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(v)}), dv[v]);
  for (std::size_t e = 0; e < s.graph.edge_count(); ++e) {
    const Edge& ed = s.graph.edges()[e];
    const long k = std::max(1L, ceil_to_long(ed.length / delta));
    for (long j = 1; j < k; ++j) {
      const Rational t = ed.length * Rational(j, k);
      Rational d = min(dv[ed.u.value] + t, dv[ed.v.value] + ed.length - t);
      if (!s.base.is_vertex() && s.base.edge() == eid(e)) d = min(d, abs(t - s.base.offset()));
      offer(GraphPoint::interior(eid(e), t), d);
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<GraphPoint> out{s.base};
  for (auto& [d, p] : pts) out.push_back(p);
  return out;
}

Rational witness_radius(const QuasiIsometryWitness& w) {
  Rational R = 1 / w.epsilon;
  if (w.domain_radius) R = min(R, *w.domain_radius);
  return R;
}

QuasiIsometryWitness make_witness(const PointedSpace& source, const PointedSpace& target, const Rational& epsilon,
                                  const Rational& delta, const std::function<GraphPoint(const GraphPoint&)>& phi,
                                  std::optional<Rational> domain_radius) {
  if (epsilon.sign() <= 0) throw PreconditionError("ε must be positive");
  QuasiIsometryWitness w{source, target, epsilon, delta, domain_radius, {}, {}};
  w.net = ball_net(source, witness_radius(w), delta);
  for (const auto& p : w.net) w.image.push_back(phi(p));
  return w;
}

QiVerdict check_quasi_isometry(const QuasiIsometryWitness& w) {
  if (w.epsilon.sign() <= 0) throw PreconditionError("ε must be positive");
  if (w.delta * 4 > w.epsilon) throw PreconditionError("net too coarse: δ > ε/4");
  if (w.net.size() != w.image.size()) throw PreconditionError("φ must assign one image per net point");
  if (!contains_canonical_net(w)) throw PreconditionError("net too coarse: canonical net points are missing");
  return evaluate(w, w.epsilon);
}

bool coverage_holds(const QuasiIsometryWitness& w, const Rational& r) {
  if (r <= w.epsilon) return true;
  std::vector<GraphPoint> imgs;
  for (std::size_t i = 0; i < w.net.size(); ++i)
    if (distance(w.source.graph, w.source.base, w.net[i]) < r) imgs.push_back(w.image[i]);
  return ball(w.target.graph, w.target.base, r - w.epsilon)
      .is_subset_of(neighbourhood(w.target.graph, imgs, w.epsilon));
}

QiEpsilon min_qi_epsilon(const QuasiIsometryWitness& w) {
  const MetricGraph& xg = w.source.graph;
  const MetricGraph& yg = w.target.graph;
  std::set<Rational> cand{4 * w.delta};
  std::vector<Rational> d0;
  for (const auto& p : w.net) d0.push_back(distance(xg, w.source.base, p));
  for (std::size_t a = 0; a < w.net.size(); ++a) {
    if (d0[a].sign() > 0) {
      cand.insert(1 / d0[a]);
      cand.insert(d0[a]);
    }
    for (std::size_t b = a + 1; b < w.net.size(); ++b)
      cand.insert(abs(distance(yg, w.image[a], w.image[b]) - distance(xg, w.net[a], w.net[b])) + 2 * w.delta);
  }
  if (w.domain_radius) cand.insert(*w.domain_radius);
  std::set<Rational> radii(d0.begin(), d0.end());
  for (const auto& r : radii) {
    if (r.sign() <= 0) continue;
    std::vector<GraphPoint> imgs;
    for (std::size_t i = 0; i < w.net.size(); ++i)
      if (d0[i] < r) imgs.push_back(w.image[i]);
    cand.insert(coverage_slack(yg, w.target.base, imgs, r));
  }
  std::erase_if(cand, [](const Rational& c) { return c.sign() <= 0; });

  const std::vector<Rational> cs(cand.begin(), cand.end());
  if (evaluate(w, cs.front() / 2).passes) return {Rational(0), false};
  // The verdict is monotone in ε: a larger ε shrinks the ball and loosens
  // both the distortion and the coverage test. Bisect over the gaps.
  auto probe = [&](std::size_t j) { return j + 1 < cs.size() ? (cs[j] + cs[j + 1]) / 2 : cs[j] + 1; };
  if (!evaluate(w, probe(cs.size() - 1)).passes) throw GraphError("no tolerance makes the witness pass");
  std::size_t lo = 0, hi = cs.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (evaluate(w, probe(mid)).passes)
      hi = mid;
    else
      lo = mid + 1;
  }
  return {cs[lo], evaluate(w, cs[lo]).passes};
}

QiSearchResult search_quasi_isometry(const PointedSpace& source, const PointedSpace& target, const Rational& epsilon,
                                     const Rational& delta, std::size_t budget) {
  if (epsilon.sign() <= 0) throw PreconditionError("ε must be positive");
  if (delta * 4 > epsilon) throw PreconditionError("net too coarse: δ > ε/4");
  QiSearchResult res;
  const Rational R = 1 / epsilon;
  const auto net = ball_net(source, R, delta);
  const auto tnet = ball_net(target, R + epsilon, delta);
  const auto dn = distance_matrix(source.graph, net);
  const auto dt = distance_matrix(target.graph, tnet);

  // Images stay within d(x0, a) + ε of y0, so their ε-neighbourhood cannot
  // reach beyond the source reach plus 2ε.
  const Rational ecc = eccentricity(target.graph, target.base);
  std::set<Rational> radii{R};
  for (std::size_t i = 0; i < net.size(); ++i)
    if (dn[0][i] >= epsilon) radii.insert(dn[0][i]);
  for (const auto& r : radii) {
    Rational reach = 0;
    for (std::size_t i = 0; i < net.size(); ++i)
      if (dn[0][i] < r) reach = max(reach, dn[0][i]);
    if (r - epsilon > reach + 2 * epsilon && ecc >= reach + 2 * epsilon) {
      res.unreachable = true;
      res.note = "B(y0, " + (r - epsilon).str() + ") reaches beyond every possible image neighbourhood";
      return res;
    }
  }

  std::vector<std::size_t> assign(net.size(), 0);
  const Rational slack = epsilon - 2 * delta;
  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == net.size()) {
      QuasiIsometryWitness w{source, target, epsilon, delta, std::nullopt, net, {}};
      for (auto j : assign) w.image.push_back(tnet[j]);
      if (!evaluate(w, epsilon).passes) return false;
      res.witness = std::move(w);
      return true;
    }
    std::vector<std::pair<Rational, std::size_t>> cands;
    for (std::size_t j = 0; j < tnet.size(); ++j) {
      const Rational off = abs(dt[0][j] - dn[0][i]);
      if (off < slack) cands.push_back({off, j});
    }
    std::sort(cands.begin(), cands.end());
    for (const auto& [off, j] : cands) {
      if (++res.nodes > budget) throw BudgetError("quasi-isometry search exceeded " + std::to_string(budget) + " nodes");
      bool ok = true;
      for (std::size_t k = 1; k < i && ok; ++k) ok = abs(dt[assign[k]][j] - dn[k][i]) < slack;
      if (!ok) continue;
      assign[i] = j;
      if (dfs(i + 1)) return true;
    }
    return false;
  };
  assign[0] = 0;  // tnet[0] is y0
  if (!dfs(1)) res.note = "no assignment of the source net into the target net passes";
  return res;
}

// ---------------------------------------------------------------------------

ConvergenceReport check_package_convergence(const ConvergenceCertificate& cert) {
  ConvergenceReport rep;
  rep.worst_epsilon_ratio = 0;
  rep.worst_tail = 0;
  rep.epsilons_nonincreasing = true;
  auto fail = [&](std::string s) { rep.failures.push_back(std::move(s)); };
  auto find = [&](std::size_t i, const Rational& r) -> const ScheduledMaps* {
    for (const auto& m : cert.maps)
      if (m.index == i && m.r == r) return &m;
    return nullptr;
  };
  const std::size_t n = cert.packages.size();
  for (std::size_t i = 1; i <= n; ++i)
    for (const auto& r : cert.radii)
      if (!find(i, r)) throw PreconditionError("schedule incomplete: no maps for i = " + std::to_string(i) + ", r = " + r.str());

  for (const auto& r : cert.radii) {
    std::optional<Rational> prev;
    for (std::size_t i = 1; i <= n; ++i) {
      const ScheduledMaps& s = *find(i, r);
      const std::string at = " at i = " + std::to_string(i) + ", r = " + r.str();
      const MappingPackage& p = cert.packages[i - 1];
      if (prev && s.epsilon > *prev) rep.epsilons_nonincreasing = false;
      prev = s.epsilon;
      const Rational ratio = s.epsilon * Rational(static_cast<long>(i)) / cert.rate;
      rep.worst_epsilon_ratio = max(rep.worst_epsilon_ratio, ratio);
      if (ratio > 1) fail("ε exceeds the declared rate" + at);
      for (const auto* w : {&s.g, &s.h}) {
        const bool is_g = w == &s.g;
        const char* name = is_g ? "g" : "h";
        if (w->epsilon != s.epsilon) fail(std::string(name) + " uses a different ε" + at);
        const GraphPoint& from = is_g ? p.source.base : p.target.base;
        const GraphPoint& to = is_g ? cert.limit.source.base : cert.limit.target.base;
        if (w->source.base != from || w->target.base != to || w->image.empty() || w->image[0] != to) {
          fail(std::string(name) + " does not send the basepoint to the basepoint" + at);
          continue;
        }
        const QiVerdict v = check_quasi_isometry(*w);
        if (!v.passes) fail(std::string(name) + " is not an ε-quasi-isometry (" + v.violated + ": " + v.detail + ")" + at);
        if (!coverage_holds(*w, r)) fail(std::string(name) + " misses the ball inclusion" + at);
      }
    }
  }

  for (const auto& smp : cert.samples) {
    if (distance(cert.limit.source.graph, smp.a, cert.limit.source.base) >= smp.r) {
      fail("sample radius does not exceed d(a, x0)");
      continue;
    }
    for (const auto& [i, ai] : smp.terms) {
      const ScheduledMaps* s = (i >= 1 && i <= n) ? find(i, smp.r) : nullptr;
      if (!s) {
        fail("sample term at index " + std::to_string(i) + " has no maps");
        continue;
      }
      const MappingPackage& p = cert.packages[i - 1];
      const Rational tau = cert.rate / Rational(static_cast<long>(i));
      const GraphPoint ga = s->g.image[nearest(p.source.graph, s->g.net, ai)];
      if (distance(cert.limit.source.graph, ga, smp.a) > tau)
        fail("g(a_i) is not within the declared rate of a at i = " + std::to_string(i));
      const GraphPoint hf = s->h.image[nearest(p.target.graph, s->h.net, p.map.eval(ai))];
      const Rational tail = distance(cert.limit.target.graph, hf, cert.limit.map.eval(smp.a));
      rep.worst_tail = max(rep.worst_tail, tail);
      if (tail > tau) fail("h(f_i(a_i)) is not within the declared rate of f(a) at i = " + std::to_string(i));
    }
  }
  rep.converges = rep.failures.empty();
  return rep;
}

ConvergenceCertificate constant_sequence(const MappingPackage& p, std::size_t count, const std::vector<Rational>& radii) {
  ConvergenceCertificate c{{}, p, radii, {}, {}, Rational(1)};
  auto id = [](const GraphPoint& q) { return q; };
  for (std::size_t i = 1; i <= count; ++i) {
    c.packages.push_back(p);
    const Rational eps(1, static_cast<long>(i));
    for (const auto& r : radii)
      c.maps.push_back(ScheduledMaps{i, r, eps, make_witness(p.source, p.source, eps, eps / 8, id, r),
                                     make_witness(p.target, p.target, eps, eps / 8, id, r)});
  }
  // Sample the limit at its vertices with constant sequences, keeping those
  // whose image stays inside the ball every h_i tabulates.
  const Rational r = radii.empty() ? Rational(1) : radii.back();
  const Rational reach = min(r, Rational(1));
  for (std::size_t v = 0; v < p.source.graph.vertex_count(); ++v) {
    const GraphPoint a = GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(v)});
    if (distance(p.source.graph, a, p.source.base) >= r) continue;
    if (distance(p.target.graph, p.map.eval(a), p.target.base) >= reach) continue;
    SampleSequence s{a, r, {}};
    for (std::size_t i = 1; i <= count; ++i) s.terms.push_back({i, a});
    c.samples.push_back(std::move(s));
  }
  return c;
}

ConvergenceCertificate restrict_indices(const ConvergenceCertificate& cert, const std::vector<std::size_t>& indices) {
  ConvergenceCertificate out{{}, cert.limit, cert.radii, {}, {}, cert.rate};
  std::vector<std::size_t> renumber(cert.packages.size() + 1, 0);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.packages.push_back(cert.packages.at(indices[k] - 1));
    renumber[indices[k]] = k + 1;
  }
  // A later position keeps its own ε, which is at most rate / (new index).
  for (const auto& m : cert.maps)
    if (m.index < renumber.size() && renumber[m.index]) {
      ScheduledMaps c = m;
      c.index = renumber[m.index];
      out.maps.push_back(std::move(c));
    }
  for (const auto& s : cert.samples) {
    SampleSequence c{s.a, s.r, {}};
    for (const auto& [i, a] : s.terms)
      if (i < renumber.size() && renumber[i]) c.terms.push_back({renumber[i], a});
    out.samples.push_back(std::move(c));
  }
  return out;
}

namespace {

void require_converges(const ConvergenceCertificate& cert) {
  const ConvergenceReport r = check_package_convergence(cert);
  if (!r.converges) throw PreconditionError("the certificate does not verify: " + r.failures.front());
}

}  // namespace

LimitReport lq_limit_harness(const ConvergenceCertificate& cert, const Rational& L) {
  for (const auto& p : cert.packages)
    if (!check_lq(p.map, L).verdict) throw PreconditionError("a package map is not " + L.str() + "-LQ");
  require_converges(cert);
  LimitReport rep;
  rep.hypotheses_hold = true;
  rep.limit_report = check_lq(cert.limit.map, L);
  rep.limit_passes = rep.limit_report.verdict;
  rep.note = rep.limit_passes ? "limit map is " + L.str() + "-LQ" : "limit map fails LQ at " + L.str();
  return rep;
}

LimitReport bld_limit_harness(const ConvergenceCertificate& cert, const Rational& L) {
  for (const auto& p : cert.packages)
    if (!check_bld(p.map, L).verdict) throw PreconditionError("a package map is not " + L.str() + "-BLD");
  require_converges(cert);
  LimitReport rep;
  rep.hypotheses_hold = true;
  rep.limit_report = check_bld(cert.limit.map, L);
  rep.limit_passes = rep.limit_report.verdict;
  const TopologyVerdict d = is_discrete(cert.limit.map);
  rep.applicable = d.holds;
  if (!d.holds) {
    rep.note = "discreteness hypothesis fails (" + d.detail + "): the BLD limit result does not apply";
  } else {
    rep.note = rep.limit_passes ? "discrete limit map is " + L.str() + "-BLD" : "discrete limit map fails BLD at " + L.str();
  }
  return rep;
}

namespace {

// Arclength position on cycle_graph(n, len), measured from v0.
Rational arclength(const MetricGraph& c, const GraphPoint& p) {
  const Rational len = c.edges().front().length;
  if (p.is_vertex()) return len * Rational(static_cast<long>(p.vertex().value));
  return len * Rational(static_cast<long>(p.edge().value)) + p.offset();
}

GraphPoint at_arclength(const MetricGraph& c, const Rational& theta) {
  const Rational len = c.edges().front().length;
  const long n = static_cast<long>(c.edge_count());
  long k = ceil_to_long(theta / len);
  if (Rational(k) * len != theta) --k;  // floor
  if (k >= n) return GraphPoint::at_vertex(VertexId{0});
  return c.point(eid(static_cast<std::size_t>(k)), theta - Rational(k) * len);
}

}  // namespace

ConvergenceCertificate winding_demo(int k_max, int m) {
  if (k_max < 1 || m < 1) throw PreconditionError("winding demo needs k_max >= 1 and m >= 1");
  const MetricGraph x = cycle_graph(m, Rational(1, m));
  const MetricGraph pt = point_graph();
  MapSpec cs;
  for (int j = 0; j < m; ++j) cs.vertex_map.push_back({"v" + std::to_string(j), "p"});
  for (int j = 1; j <= m; ++j) cs.edge_map.push_back({"e" + std::to_string(j), {}});
  const GraphMap limit = build_map(x, pt, cs);
  const GraphPoint v0 = GraphPoint::at_vertex(VertexId{0});

  ConvergenceCertificate c{{}, make_package(limit, v0), {Rational(1, 2), 1, 2}, {}, {}, Rational(1)};
  for (int k = 1; k <= k_max; ++k) c.packages.push_back(make_package(winding_map(k, m, Rational(1, k * m)), v0));

  for (int i = 1; i <= k_max; ++i) {
    const MappingPackage& p = c.packages[static_cast<std::size_t>(i - 1)];
    const Rational eps(3, 4 * i);
    auto g = [&](const GraphPoint& q) { return at_arclength(x, arclength(p.source.graph, q)); };
    auto h = [&](const GraphPoint&) { return GraphPoint::at_vertex(VertexId{0}); };
    for (const auto& r : c.radii)
      c.maps.push_back(ScheduledMaps{static_cast<std::size_t>(i), r, eps,
                                     make_witness(p.source, c.limit.source, eps, Rational(1, 8 * i), g, r),
                                     make_witness(p.target, c.limit.target, eps, Rational(1, 16 * i), h, r)});
  }
  // Samples: vertices and edge midpoints of the limit circle, approached by
  // the points of X_i at the same arclength.
  for (int j = 0; j < 2 * m; ++j) {
    const Rational theta(j, 2 * m);
    SampleSequence s{at_arclength(x, theta), Rational(1), {}};
    for (int i = 1; i <= k_max; ++i)
      s.terms.push_back({static_cast<std::size_t>(i),
                         at_arclength(c.packages[static_cast<std::size_t>(i - 1)].source.graph, theta)});
    c.samples.push_back(std::move(s));
  }
  return c;
}

}  // namespace bldgraph
