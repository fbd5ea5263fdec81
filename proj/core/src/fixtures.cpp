#include "bldgraph/fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace bldgraph {

namespace {

std::string vname(int i) { return "v" + std::to_string(i); }
std::string ename(int i) { return "e" + std::to_string(i); }

}  // namespace

MetricGraph path_graph(int n, const Rational& len) {
  GraphSpec s;
  for (int i = 0; i <= n; ++i) s.vertices.push_back(vname(i));
  for (int i = 1; i <= n; ++i) s.edges.push_back({ename(i), vname(i - 1), vname(i), len});
  return build_graph(s);
}

MetricGraph cycle_graph(int n, const Rational& len) {
  if (n < 1) throw GraphError("a cycle needs at least one edge");
  GraphSpec s;
  for (int i = 0; i < n; ++i) s.vertices.push_back(vname(i));
  for (int i = 1; i <= n; ++i) s.edges.push_back({ename(i), vname(i - 1), vname(i % n), len});
  return build_graph(s);
}

MetricGraph point_graph() { return build_graph(GraphSpec{{"p"}, {}, std::string("p")}); }

GraphMap winding_map(int k, int n, const Rational& len) {
  const MetricGraph x = cycle_graph(k * n, len);
  const MetricGraph y = cycle_graph(n, len);
  MapSpec spec;
  for (int j = 0; j < k * n; ++j) spec.vertex_map.push_back({vname(j), vname(j % n)});
  for (int i = 1; i <= k * n; ++i) spec.edge_map.push_back({ename(i), {{ename((i - 1) % n + 1), true}}});
  return build_map(x, y, spec);
}

GraphMap tent_map() {
  MapSpec spec{{{"v0", "v0"}, {"v1", "v1"}, {"v2", "v0"}}, {{"e1", {{"e1", true}}}, {"e2", {{"e1", false}}}}};
  return build_map(path_graph(2), path_graph(1), spec);
}

GraphMap fold_map() {
  MapSpec spec{{{"v0", "v2"}, {"v1", "v1"}, {"v2", "v2"}}, {{"e1", {{"e2", false}}}, {"e2", {{"e2", true}}}}};
  return build_map(path_graph(2), path_graph(2), spec);
}

GraphMap speed2_map() {
  MapSpec spec{{{"v0", "v0"}, {"v1", "v2"}}, {{"e1", {{"e1", true}, {"e2", true}}}}};
  return build_map(path_graph(1), path_graph(2), spec);
}

GraphMap const_map() {
  MapSpec spec{{{"v0", "p"}, {"v1", "p"}, {"v2", "p"}}, {{"e1", {}}, {"e2", {}}, {"e3", {}}}};
  return build_map(cycle_graph(3, 1), point_graph(), spec);
}

Rational random_length(std::mt19937& rng, long max_den) {
  const long q = std::uniform_int_distribution<long>(1, max_den)(rng);
  const long p = std::uniform_int_distribution<long>(1, 2 * q)(rng);
  return Rational(p, q);
}

Walk random_walk(std::mt19937& rng, const MetricGraph& g, const GraphPoint& start, int segments, long max_den) {
  Walk w{start, {}};
  GraphPoint cur = start;
  for (int i = 0; i < segments; ++i) {
    const auto dirs = g.directions_at(cur);
    if (dirs.empty()) break;
    const Direction d = dirs[std::uniform_int_distribution<std::size_t>(0, dirs.size() - 1)(rng)];
    const Rational len = g.edge(d.edge).length;
    const Rational from = cur.is_vertex() ? (d.forward ? Rational(0) : len) : cur.offset();
    const Rational room = d.forward ? len - from : from;
    Rational run = room;
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      const long q = std::uniform_int_distribution<long>(2, max_den)(rng);
      run = room * Rational(std::uniform_int_distribution<long>(1, q - 1)(rng), q);
    }
    const Segment s{d.edge, from, d.forward ? from + run : from - run};
    w.segments.push_back(s);
    cur = segment_end(g, s);
  }
  return w;
}

GraphMap random_branched_cover(std::mt19937& rng, const RandomCoverOptions& opt) {
  auto coin = [&](int num, int den) { return std::uniform_int_distribution<int>(0, den - 1)(rng) < num; };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  for (int attempt = 0; attempt < 1000; ++attempt) {
    // Target: a random tree plus a few extra edges (loops and multi-edges allowed).
    const int ny = pick(1, opt.max_target_vertices);
    GraphSpec ys;
    for (int v = 0; v < ny; ++v) ys.vertices.push_back("y" + std::to_string(v));
    std::vector<std::pair<int, int>> yedges;
    for (int v = 1; v < ny; ++v) {
      const int w = pick(0, v - 1);
      yedges.push_back(coin(1, 2) ? std::pair{v, w} : std::pair{w, v});
    }
    const int extra = ny == 1 ? pick(1, 2) : pick(0, 2);
    for (int i = 0; i < extra; ++i) yedges.push_back({pick(0, ny - 1), pick(0, ny - 1)});
    for (std::size_t i = 0; i < yedges.size(); ++i)
      ys.edges.push_back({"f" + std::to_string(i + 1), ys.vertices[yedges[i].first], ys.vertices[yedges[i].second],
                          random_length(rng, opt.max_denominator)});
    const MetricGraph y = build_graph(ys);

    const int k = pick(1, std::max(1, std::min(opt.max_sheets, opt.max_source_vertices / ny)));
    // Source vertex (v, sheet) -> representative after gluing.
    std::vector<int> rep(ny * k);
    std::iota(rep.begin(), rep.end(), 0);
    if (k >= 2 && coin(1, 2)) {
      const int v = pick(0, ny - 1);
      rep[v * k + 1] = v * k;
    }
    std::vector<int> index(ny * k, -1);
    GraphSpec xs;
    std::vector<VertexId> vmap;
    for (int i = 0; i < ny * k; ++i) {
      if (rep[i] != i) continue;
      index[i] = static_cast<int>(xs.vertices.size());
      xs.vertices.push_back("x" + std::to_string(i / k) + "_" + std::to_string(i % k));
      vmap.push_back(VertexId{static_cast<std::uint32_t>(i / k)});
    }
    auto xv = [&](int v, int sheet) { return xs.vertices[index[rep[v * k + sheet]]]; };

    std::vector<Walk> walks;
    for (std::size_t e = 0; e < yedges.size(); ++e) {
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const Edge& ye = y.edges()[e];
      for (int s = 0; s < k; ++s) {
        xs.edges.push_back({"d" + std::to_string(xs.edges.size() + 1), xv(yedges[e].first, s),
                            xv(yedges[e].second, perm[s]), random_length(rng, opt.max_denominator)});
        walks.push_back(Walk{GraphPoint::at_vertex(ye.u), {Segment{EdgeId{static_cast<std::uint32_t>(e)}, 0, ye.length}}});
      }
    }
    // Fold over a leaf: a source loop that runs out to the leaf and back.
    if (coin(1, 3)) {
      for (std::size_t e = 0; e < yedges.size(); ++e) {
        const auto [a, b] = yedges[e];
        if (a == b) continue;
        auto degree = [&](int v) {
          int d = 0;
          for (auto [p, q] : yedges) d += (p == v) + (q == v);
          return d;
        };
        const bool leaf_b = degree(b) == 1, leaf_a = degree(a) == 1;
        if (!leaf_a && !leaf_b) continue;
        const int base = leaf_b ? a : b;
        const int sheet = pick(0, k - 1);
        const Edge& ye = y.edges()[e];
        const EdgeId te{static_cast<std::uint32_t>(e)};
        Walk w{GraphPoint::at_vertex(VertexId{static_cast<std::uint32_t>(base)}), {}};
        if (leaf_b) {
          w.segments = {Segment{te, 0, ye.length}, Segment{te, ye.length, 0}};
        } else {
          w.segments = {Segment{te, ye.length, 0}, Segment{te, 0, ye.length}};
        }
        xs.edges.push_back({"d" + std::to_string(xs.edges.size() + 1), xv(base, sheet), xv(base, sheet),
                            random_length(rng, opt.max_denominator)});
        walks.push_back(std::move(w));
        break;
      }
    }
    if (static_cast<int>(xs.vertices.size()) > opt.max_source_vertices) continue;
    try {
      MetricGraph x = build_graph(xs);
      return GraphMap::build(std::move(x), y, std::move(vmap), std::move(walks));
    } catch (const GraphError&) {
      continue;  // disconnected cover; draw again
    }
  }
  throw GraphError("random cover generation did not converge");
}

}  // namespace bldgraph
