#include "bldgraph/lifting.hpp"

#include "bldgraph/checkers.hpp"

#include <algorithm>
#include <functional>

namespace bldgraph {

namespace {

struct Step {
  Direction dir;
  Segment seg;  // lifted segment in X
};

const Piece& piece_along(const GraphMap& f, const GraphPoint& p, const Direction& d) {
  const auto& ps = f.pieces(d.edge);
  if (p.is_vertex()) return d.forward ? ps.front() : ps.back();
  for (const auto& q : ps)
    if (d.forward ? (q.s0 <= p.offset() && p.offset() < q.s1) : (q.s0 < p.offset() && p.offset() <= q.s1)) return q;
  throw GraphError("no piece along direction");
}

// Continuations of the base segment `b` from p: source directions whose image
// leaves f(p) along b. Non-reversing ones come first when `prev` is set and
// any exist; otherwise all of them, in (edge, forward-first) order.
std::vector<Step> continuations(const GraphMap& f, const GraphPoint& p, const Segment& b,
                                const std::optional<Direction>& prev) {
  const MetricGraph& x = f.source();
  const Direction want{b.edge, b.from < b.to};
  std::vector<Step> all;
  for (const auto& e : direction_profile(f, p).entries) {
    if (!e.image || *e.image != want) continue;
    const Piece& piece = piece_along(f, p, e.source);
    const Rational s = p.is_vertex() ? (e.source.forward ? Rational(0) : x.edge(e.source.edge).length) : p.offset();
    all.push_back(Step{e.source, Segment{e.source.edge, s, piece.source_at(b.to)}});
  }
  if (prev) {
    const Direction back{prev->edge, !prev->forward};
    std::vector<Step> onward;
    for (const auto& st : all)
      if (st.dir != back) onward.push_back(st);
    if (!onward.empty()) return onward;
  }
  return all;
}

Walk base_segments(const GraphMap& f, const Walk& beta) {
  validate_walk(f.target(), beta);
  return normalize_walk(f.target(), beta);
}

void require_start(const GraphMap& f, const Walk& beta, const GraphPoint& x0) {
  if (!is_branched_cover(f)) throw PreconditionError("lifting requires a branched cover");
  f.source().validate(x0);
  if (f.eval(x0) != beta.start) throw PreconditionError("the start point does not lie over the start of the walk");
}

}  // namespace

Lift total_lift(const GraphMap& f, const Walk& beta, const GraphPoint& x0) {
  require_start(f, beta, x0);
  const Walk b = base_segments(f, beta);
  Lift lift{beta, Walk{x0, {}}, x0, false, {}};
  GraphPoint p = x0;
  std::optional<Direction> prev;
  for (const auto& seg : b.segments) {
    const auto cands = continuations(f, p, seg, prev);
    if (cands.empty())
      throw GraphError("the walk leaves the image of the map at " + describe(f.target(), segment_start(f.target(), seg)));
    if (cands.size() > 1) lift.choices.push_back(0);
    const Step& st = cands.front();
    lift.path.segments.push_back(st.seg);
    p = segment_end(f.source(), st.seg);
    prev = st.dir;
  }
  lift.path = normalize_walk(f.source(), lift.path);
  lift.total = true;
  return lift;
}

LiftSet all_maximal_lifts(const GraphMap& f, const Walk& beta, const std::optional<std::vector<GraphPoint>>& starts,
                          std::size_t limit) {
  const std::vector<GraphPoint> from = starts ? *starts : fiber(f, beta.start).points;
  LiftSet out;
  for (const auto& x0 : from) require_start(f, beta, x0);
  const Walk b = base_segments(f, beta);

  for (const auto& x0 : from) {
    Lift cur{beta, Walk{x0, {}}, x0, false, {}};
    std::function<void(std::size_t, const GraphPoint&, std::optional<Direction>)> dfs =
        [&](std::size_t i, const GraphPoint& p, std::optional<Direction> prev) {
          if (out.truncated) return;
          if (i == b.segments.size()) {
            if (out.lifts.size() >= limit) {
              out.truncated = true;
              return;
            }
            Lift done = cur;
            done.path = normalize_walk(f.source(), done.path);
            done.total = true;
            if (std::none_of(out.lifts.begin(), out.lifts.end(),
                             [&](const Lift& l) { return l.path == done.path; }))
              out.lifts.push_back(std::move(done));
            return;
          }
          const auto cands = continuations(f, p, b.segments[i], prev);
          for (std::size_t k = 0; k < cands.size(); ++k) {
            cur.path.segments.push_back(cands[k].seg);
            if (cands.size() > 1) cur.choices.push_back(k);
            dfs(i + 1, segment_end(f.source(), cands[k].seg), cands[k].dir);
            if (cands.size() > 1) cur.choices.pop_back();
            cur.path.segments.pop_back();
          }
        };
    dfs(0, x0, std::nullopt);
  }
  return out;
}

FiberTransport fiber_transport(const GraphMap& f, const GraphPoint& x, const GraphPoint& y, const Rational& L) {
  if (!check_bld(f, L).verdict) throw PreconditionError("fiber transport needs an L-BLD map");
  for (const auto& b : branch_set(f)) {
    const GraphPoint fb = f.eval(b);
    if (fb == x || fb == y) throw PreconditionError("endpoint lies in the image of the branch set");
  }
  FiberTransport t{x, y, fiber(f, x).points, fiber(f, y).points, {}, {}, L * distance(f.target(), x, y)};
  const Walk gamma = geodesic(f.target(), x, y);
  const std::size_t n = t.source_fiber.size(), m = t.target_fiber.size();

  // Candidate partners of each source point: endpoints of its lifts.
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LiftSet ls = all_maximal_lifts(f, gamma, std::vector<GraphPoint>{t.source_fiber[i]});
    for (const auto& l : ls.lifts) {
      const GraphPoint end = walk_end(f.source(), l.path);
      const auto it = std::find(t.target_fiber.begin(), t.target_fiber.end(), end);
      if (it == t.target_fiber.end()) throw GraphError("lift does not end over the target point");
      const std::size_t j = static_cast<std::size_t>(it - t.target_fiber.begin());
      if (std::find(adj[i].begin(), adj[i].end(), j) == adj[i].end()) adj[i].push_back(j);
    }
  }

  // Kuhn's augmenting paths for a perfect matching.
  std::vector<std::optional<std::size_t>> match_of_target(m);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& seen) {
    for (std::size_t j : adj[i]) {
      if (seen[j]) continue;
      seen[j] = true;
      if (!match_of_target[j] || augment(*match_of_target[j], seen)) {
        match_of_target[j] = i;
        return true;
      }
    }
    return false;
  };
  std::size_t matched = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> seen(m, false);
    if (augment(i, seen)) ++matched;
  }
  t.bijective = n == m && matched == n;
  if (!t.bijective) return t;

  t.pairing.assign(n, 0);
  for (std::size_t j = 0; j < m; ++j) t.pairing[*match_of_target[j]] = j;
  t.within_bound = true;
  for (std::size_t i = 0; i < n; ++i) {
    t.distances.push_back(distance(f.source(), t.source_fiber[i], t.target_fiber[t.pairing[i]]));
    if (t.distances.back() > t.bound) t.within_bound = false;
  }
  return t;
}

bool verify_lift(const GraphMap& f, const Walk& alpha, const Walk& beta) {
  try {
    validate_walk(f.source(), alpha);
    validate_walk(f.target(), beta);
  } catch (const GraphError&) {
    return false;
  }
  if (f.eval(alpha.start) != beta.start) return false;
  if (normalize_walk(f.target(), image_walk(f, alpha)) != normalize_walk(f.target(), beta)) return false;
  Rational stretched = 0;
  for (const auto& s : alpha.segments) stretched += f.speed(s.edge) * s.length();
  return stretched == walk_length(f.target(), beta);
}

}  // namespace bldgraph
