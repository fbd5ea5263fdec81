#include "bldgraph/oracle.hpp"

#include "bldgraph/metric_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace bldgraph {

namespace {

constexpr int kWindow = 4;  // grid steps searched around a point

VertexId vid(std::size_t v) { return VertexId{static_cast<std::uint32_t>(v)}; }

std::vector<Rational> grid_offsets(const Rational& len, const Rational& step) {
  const long n = std::max(1L, ceil_to_long(len / step));
  std::vector<Rational> out;
  for (long k = 1; k < n; ++k) out.push_back(len * Rational(k, n));
  return out;
}

}  // namespace

DyadicOracle::DyadicOracle(const GraphMap& f, long divisions) : f_(f) {
  if (divisions < 1) throw PreconditionError("the oracle grid needs at least one division");
  build_source_grid(divisions);
  build_target_grid(divisions);
  scan_adjacent();
  scan_pointwise();
  scan_co_lipschitz();
  if (branched_cover()) scan_coradial();
}

void DyadicOracle::build_source_grid(long divisions) {
  const MetricGraph& x = f_.source();
  for (std::size_t v = 0; v < x.vertex_count(); ++v) pts_.push_back(GraphPoint::at_vertex(vid(v)));
  adj_.assign(pts_.size(), {});
  if (x.edge_count() == 0) {
    for (const auto& p : pts_) img_.push_back(f_.eval(p));
    breakpoint_.assign(pts_.size(), true);
    return;
  }
  const Rational step = x.min_edge_length() / Rational(divisions);
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    const EdgeId id{static_cast<std::uint32_t>(e)};
    const Edge& ed = x.edge(id);
    std::set<Rational> offs;
    for (const auto& o : grid_offsets(ed.length, step)) offs.insert(o);
    std::set<Rational> breaks;
    for (const auto& p : f_.pieces(id))
      for (const auto& s : {p.s0, p.s1})
        if (s.sign() > 0 && s < ed.length) breaks.insert(s);
    offs.insert(breaks.begin(), breaks.end());

    std::size_t prev = ed.u.value;
    Rational prev_off = 0;
    auto link = [&](std::size_t node, const Rational& off) {
      adj_[prev].push_back(Step{node, off - prev_off, id, prev_off, off});
      adj_[node].push_back(Step{prev, off - prev_off, id, off, prev_off});
      prev = node;
      prev_off = off;
    };
    for (const auto& o : offs) {
      pts_.push_back(GraphPoint::interior(id, o));
      adj_.emplace_back();
      interior_break_.push_back(breaks.count(o) > 0);
      link(pts_.size() - 1, o);
    }
    link(ed.v.value, ed.length);
  }
  for (const auto& p : pts_) img_.push_back(f_.eval(p));
  // Vertices always end affine regimes; interior points only at piece ends.
  breakpoint_.assign(pts_.size(), false);
  for (std::size_t v = 0; v < x.vertex_count(); ++v) breakpoint_[v] = true;
  for (std::size_t i = 0; i < interior_break_.size(); ++i) breakpoint_[x.vertex_count() + i] = interior_break_[i];
}

void DyadicOracle::build_target_grid(long divisions) {
  const MetricGraph& y = f_.target();
  for (std::size_t v = 0; v < y.vertex_count(); ++v) ypts_.push_back(GraphPoint::at_vertex(vid(v)));
  if (y.edge_count() == 0) return;
  y_step_ = y.min_edge_length() / Rational(divisions);
  for (std::size_t e = 0; e < y.edge_count(); ++e) {
    const EdgeId id{static_cast<std::uint32_t>(e)};
    for (const auto& o : grid_offsets(y.edge(id).length, y_step_)) ypts_.push_back(GraphPoint::interior(id, o));
  }
}

void DyadicOracle::scan_adjacent() {
  const MetricGraph& y = f_.target();
  lipschitz_ = 0;
  std::optional<Rational> lo, hi;
  for (std::size_t a = 0; a < pts_.size(); ++a) {
    std::set<Direction> seen;
    for (const auto& st : adj_[a]) {
      const Rational dy = distance(y, img_[a], img_[st.to]);
      const Rational ratio = dy / st.length;
      lipschitz_ = max(lipschitz_, ratio);
      if (!lo || ratio < *lo) lo = ratio;
      if (!hi || ratio > *hi) hi = ratio;
      if (dy.sign() == 0) {
        discrete_ = false;
        continue;
      }
      const Walk g = geodesic(y, img_[a], img_[st.to]);
      seen.insert(segment_direction(g.segments.front()));
    }
    for (const auto& d : y.directions_at(img_[a]))
      if (!seen.count(d)) open_ = false;
  }
  if (!lo) {
    radial_ = Rational(1);
  } else if (lo->sign() > 0) {
    radial_ = max(max(Rational(1), *hi), 1 / *lo);
  }
}

void DyadicOracle::scan_pointwise() {
  const MetricGraph& x = f_.source();
  const MetricGraph& y = f_.target();
  std::optional<Rational> lo, hi;
  for (std::size_t a = 0; a < pts_.size(); ++a) {
    // Grid points within kWindow steps, not crossing another breakpoint.
    std::vector<int> hops(pts_.size(), -1);
    std::deque<std::size_t> queue{a};
    hops[a] = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const auto& st : adj_[u]) {
        if (hops[st.to] >= 0 || breakpoint_[st.to]) continue;
        hops[st.to] = hops[u] + 1;
        if (hops[st.to] < kWindow) queue.push_back(st.to);
      }
    }
    for (std::size_t b = 0; b < pts_.size(); ++b) {
      if (hops[b] <= 0) continue;
      const Rational ratio = distance(y, img_[a], img_[b]) / distance(x, pts_[a], pts_[b]);
      if (!lo || ratio < *lo) lo = ratio;
      if (!hi || ratio > *hi) hi = ratio;
    }
  }
  if (!lo) {
    pointwise_ = Rational(1);
  } else if (lo->sign() > 0) {
    pointwise_ = max(max(Rational(1), *hi), 1 / *lo);
  }
}

void DyadicOracle::scan_co_lipschitz() {
  const MetricGraph& x = f_.source();
  const MetricGraph& y = f_.target();
  std::vector<std::vector<GraphPoint>> fibers;
  for (const auto& z : ypts_) fibers.push_back(fiber(f_, z).points);
  const Rational near = y_step_ * Rational(kWindow);

  bool infinite = false, infinite_local = false;
  Rational sup = 0, sup_local = 0;
  for (std::size_t a = 0; a < pts_.size(); ++a)
    for (std::size_t k = 0; k < ypts_.size(); ++k) {
      const Rational d = distance(y, img_[a], ypts_[k]);
      if (d.sign() == 0) continue;
      const bool local = d <= near;
      if (fibers[k].empty()) {
        infinite = true;
        if (local) infinite_local = true;
        continue;
      }
      Rational rho = distance(x, pts_[a], fibers[k][0]);
      for (std::size_t j = 1; j < fibers[k].size(); ++j) rho = min(rho, distance(x, pts_[a], fibers[k][j]));
      const Rational ratio = rho / d;
      sup = max(sup, ratio);
      if (local) sup_local = max(sup_local, ratio);
    }
  const Rational base = max(Rational(1), lipschitz_);
  if (!infinite) lq_ = max(base, sup);
  if (!infinite_local) lq_local_ = max(base, sup_local);
}

void DyadicOracle::scan_coradial() {
  const MetricGraph& x = f_.source();
  const MetricGraph& y = f_.target();
  if (y.edge_count() == 0 || x.edge_count() == 0) {
    coradial_ = Rational(1);
    return;
  }
  Rational worst = 1;
  for (std::size_t a = 0; a < pts_.size(); ++a) {
    std::vector<std::optional<Rational>> value(pts_.size());
    auto val = [&](std::size_t b) -> const Rational& {
      if (!value[b]) value[b] = distance(y, img_[a], img_[b]);
      return *value[b];
    };
    // U(a, f, r) by search over the grid. The condition only concerns small
    // r, so r halves until U reaches no breakpoint other than a.
    Rational r = y_step_ / 2;
    std::optional<Rational> far, close;
    for (int tries = 0;; ++tries) {
      if (tries > 64) throw GraphError("oracle: no radius isolates a breakpoint");
      far.reset();
      close.reset();
      bool spilled = false;
      std::vector<bool> inside(pts_.size(), false);
      std::deque<std::size_t> queue{a};
      inside[a] = true;
      while (!queue.empty() && !spilled) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (const auto& st : adj_[u]) {
          if (val(st.to) < r) {
            if (inside[st.to]) continue;
            if (breakpoint_[st.to]) {
              spilled = true;
              break;
            }
            inside[st.to] = true;
            queue.push_back(st.to);
            continue;
          }
          // The image moves affinely along the step, so the distance to
          // f(a) crosses r where linear interpolation says.
          const Rational t = (r - val(u)) / (val(st.to) - val(u));
          const GraphPoint q = x.point(st.edge, st.off_from + (st.off_to - st.off_from) * t);
          const Rational d = distance(x, pts_[a], q);
          if (!far || d > *far) far = d;
          if (!close || d < *close) close = d;
        }
      }
      if (!spilled) break;
      r /= 2;
    }
    if (!far) continue;  // U is everything: no boundary
    worst = max(worst, *far / r);
    if (close->sign() == 0) return;  // no finite constant
    worst = max(worst, r / *close);
  }
  coradial_ = worst;
}

std::optional<Rational> DyadicOracle::constant(Property p) const {
  switch (p) {
    case Property::Lipschitz:
      return lipschitz_;
    case Property::Radial:
      return radial_;
    case Property::RadialPointwise:
      return pointwise_;
    case Property::LQ:
      return lq_;
    case Property::Coradial:
      return branched_cover() ? coradial_ : std::nullopt;
    case Property::BLD:
      return branched_cover() ? radial_ : std::nullopt;
  }
  return std::nullopt;
}

std::optional<Rational> DyadicOracle::lq_local_constant() const { return lq_local_; }

bool DyadicOracle::check(Property p, const Rational& L) const {
  const auto c = constant(p);
  return c && *c <= L;
}

bool DyadicOracle::check_lq_local(const Rational& L) const { return lq_local_ && *lq_local_ <= L; }

}  // namespace bldgraph
