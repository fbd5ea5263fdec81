#pragma once

// The canonical corpus of spaces and maps, plus a random branched-cover
// generator used by property tests and the acceptance suite.

#include "bldgraph/graph_map.hpp"

#include <random>

namespace bldgraph {

/// I_n: vertices v0..vn, edge e_i from v_{i-1} to v_i, all of length `len`.
MetricGraph path_graph(int n, const Rational& len = 1);
/// C_n(len): vertices v0..v_{n-1}, edge e_i from v_{i-1} to v_{i mod n}.
/// C_1 is a single self-loop.
MetricGraph cycle_graph(int n, const Rational& len = 1);
/// A single vertex `p` and no edges.
MetricGraph point_graph();

/// W_k: C_{kn}(len) -> C_n(len), edge e_i onto edge e_{(i-1) mod n + 1} at speed 1.
GraphMap winding_map(int k, int n, const Rational& len = 1);
/// I_2 -> I_1 folding v1 onto the far end: v0, v2 -> v0 and v1 -> v1.
GraphMap tent_map();
/// I_2 -> I_2 folding both edges onto e2: v0, v2 -> v2 and v1 -> v1.
GraphMap fold_map();
/// I_1 -> I_2 at speed 2.
GraphMap speed2_map();
/// C_3(1) -> a point.
GraphMap const_map();

struct RandomCoverOptions {
  int max_target_vertices = 4;
  int max_sheets = 2;
  int max_source_vertices = 8;
  long max_denominator = 8;
};

/// A random branched cover between small connected graphs with rational
/// lengths of bounded denominator. Sheets are glued over random vertices and
/// folded over leaves to create branch points.
GraphMap random_branched_cover(std::mt19937& rng, const RandomCoverOptions& opt = {});

/// A random walk of `segments` monotone pieces from `start`: each piece picks a
/// direction at the current point and runs either to the next vertex or to a
/// random rational point before it (denominator at most max_den times the
/// edge-length denominator).
Walk random_walk(std::mt19937& rng, const MetricGraph& g, const GraphPoint& start, int segments, long max_den = 8);

/// A random positive rational p/q with q <= max_den and value in (0, 2].
Rational random_length(std::mt19937& rng, long max_den);

}  // namespace bldgraph
