#pragma once

// Pointed mapping packages, ε-quasi-isometries on finite nets, and finite
// certificates of package convergence.
//
// A quasi-isometry witness stores φ on a net of the ball B(x0, R): the
// vertices of a δ-subdivision that lie in the ball, plus the basepoint.
// Every point of the ball is within δ of a net point inside the ball, so
// extending φ by a nearest net point costs at most 2δ of distortion; the
// distortion test charges that correction, which makes a passing verdict
// valid for the extended map.

#include "bldgraph/checkers.hpp"
#include "bldgraph/graph_map.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bldgraph {

/// A search or enumeration exceeded its configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PointedSpace {
  MetricGraph graph;
  GraphPoint base;
};

/// Basepoint from the graph's declared basepoint, else its first vertex.
PointedSpace pointed(const MetricGraph& g);

struct MappingPackage {
  PointedSpace source;
  PointedSpace target;
  GraphMap map;
};

/// The package (X, x0) -> (Y, f(x0)).
MappingPackage make_package(const GraphMap& f, const GraphPoint& x0);

/// Vertices of the δ-subdivision of g inside the open ball B(base, radius),
/// and the basepoint first; sorted by distance to the basepoint.
std::vector<GraphPoint> ball_net(const PointedSpace& s, const Rational& radius, const Rational& delta);

struct QuasiIsometryWitness {
  PointedSpace source;
  PointedSpace target;
  Rational epsilon;
  Rational delta;
  /// φ is only defined on B(x0, domain_radius) when set.
  std::optional<Rational> domain_radius;
  std::vector<GraphPoint> net;    ///< in the source
  std::vector<GraphPoint> image;  ///< φ(net[i]) in the target
};

/// Radius of the ball the witness must cover: min(1/ε, domain radius).
Rational witness_radius(const QuasiIsometryWitness& w);

/// Tabulates φ on the canonical net of the witness ball.
QuasiIsometryWitness make_witness(const PointedSpace& source, const PointedSpace& target, const Rational& epsilon,
                                  const Rational& delta, const std::function<GraphPoint(const GraphPoint&)>& phi,
                                  std::optional<Rational> domain_radius = std::nullopt);

struct QiVerdict {
  bool passes = false;
  /// "basepoint", "distortion" or "coverage" on failure.
  std::string violated;
  std::string detail;
  Rational max_distortion;
  std::optional<std::pair<GraphPoint, GraphPoint>> pair;  ///< worst distortion pair
  std::optional<Rational> radius;                         ///< failing coverage radius
};

/// Throws PreconditionError when δ > ε/4 or the net lacks canonical points.
QiVerdict check_quasi_isometry(const QuasiIsometryWitness& w);

/// N_ε(φ(B(x0, r))) ⊇ B(y0, r - ε) using the net points with d(x0, a) < r.
bool coverage_holds(const QuasiIsometryWitness& w, const Rational& r);

struct QiEpsilon {
  Rational value;
  bool attained = false;
};

/// Least ε, among the finitely many values where the verdict can change,
/// past which the witness's φ passes with its own net and δ.
QiEpsilon min_qi_epsilon(const QuasiIsometryWitness& w);

struct QiSearchResult {
  std::optional<QuasiIsometryWitness> witness;
  std::size_t nodes = 0;
  /// Coverage is impossible for every assignment (no search needed).
  bool unreachable = false;
  std::string note;
};

/// Exhaustive depth-first search for φ from the source net into the target
/// net. Throws BudgetError once more than `budget` nodes are visited.
QiSearchResult search_quasi_isometry(const PointedSpace& source, const PointedSpace& target, const Rational& epsilon,
                                     const Rational& delta, std::size_t budget = 1000000);

// ---------------------------------------------------------------------------
// Convergence certificates

struct ScheduledMaps {
  std::size_t index = 0;  ///< i, 1-based
  Rational r;
  Rational epsilon;
  QuasiIsometryWitness g;  ///< B(x_i, r) -> X
  QuasiIsometryWitness h;  ///< B(y_i, r) -> Y
};

struct SampleSequence {
  GraphPoint a;  ///< point of the limit source
  Rational r;    ///< radius of the maps used, r > d(a, x0)
  std::vector<std::pair<std::size_t, GraphPoint>> terms;  ///< (i, a_i in X_i)
};

struct ConvergenceCertificate {
  std::vector<MappingPackage> packages;  ///< packages[i - 1]
  MappingPackage limit;
  std::vector<Rational> radii;
  std::vector<ScheduledMaps> maps;
  std::vector<SampleSequence> samples;
  /// Declared rate: ε_i and the (GH-ii) tails are at most rate / i.
  Rational rate;
};

struct ConvergenceReport {
  bool converges = false;
  std::vector<std::string> failures;
  Rational worst_epsilon_ratio;  ///< max of i·ε_i / rate
  Rational worst_tail;           ///< max of d(h(f_i(a_i)), f(a))
  bool epsilons_nonincreasing = false;
};

/// Throws PreconditionError when some (i, r) of the schedule has no maps.
ConvergenceReport check_package_convergence(const ConvergenceCertificate& cert);

/// The same package at every index with identity maps and ε_i = 1/i.
ConvergenceCertificate constant_sequence(const MappingPackage& p, std::size_t count,
                                         const std::vector<Rational>& radii = {Rational(1, 2), 1, 2});

/// Keeps the packages, maps and sample terms whose index is listed, renumbered
/// in order.
ConvergenceCertificate restrict_indices(const ConvergenceCertificate& cert, const std::vector<std::size_t>& indices);

struct LimitReport {
  bool hypotheses_hold = false;  ///< every f_j passes and the sequence converges
  bool applicable = true;        ///< limit discreteness, for the BLD harness
  bool limit_passes = false;
  std::string note;
  PropertyReport limit_report;
};

/// Limits of L-LQ packages are L-LQ. Throws PreconditionError when some
/// package map fails check_lq or the certificate does not verify.
LimitReport lq_limit_harness(const ConvergenceCertificate& cert, const Rational& L);
/// Limits of L-BLD packages with a discrete limit map are L-BLD.
LimitReport bld_limit_harness(const ConvergenceCertificate& cert, const Rational& L);

/// Packages W_k: C_{km}(1/(km)) -> C_m(1/(km)) winding k times at speed 1,
/// for k = 1..k_max, converging to the constant map C_m(1/m) -> point.
ConvergenceCertificate winding_demo(int k_max, int m);

}  // namespace bldgraph
