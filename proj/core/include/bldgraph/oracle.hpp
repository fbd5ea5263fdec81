#pragma once

// Brute-force cross-check on a dyadic grid.
//
// The grid of a graph puts 64 equal steps (by default) into its shortest
// edge and the same step length, rounded to divide each edge, everywhere
// else; the source grid also contains every breakpoint of the map. Each
// condition is then evaluated by exhaustion over grid points:
//
//   lipschitz, radial   ratios d(f a, f b) / d(a, b) over adjacent grid points
//   radial-pointwise    the same ratios from each grid point to every grid
//                       point within four steps
//   lq                  Lipschitz, and d(x, f^{-1}(z)) / d(f x, z) over all
//                       source grid points x and target grid points z
//   lq-local            the same with d(f x, z) at most four target steps
//   coradial            U(x, f, r) at r = half a target step, grown by
//                       breadth-first search over the grid, its boundary
//                       found by linear interpolation along grid steps
//   open, discrete      image directions of the grid steps at each point
//
// None of this shares code with the exact checkers beyond point evaluation,
// distances and fibers.

#include "bldgraph/checkers.hpp"

#include <optional>
#include <vector>

namespace bldgraph {

class DyadicOracle {
 public:
  explicit DyadicOracle(const GraphMap& f, long divisions = 64);

  bool open() const { return open_; }
  bool discrete() const { return discrete_; }
  bool branched_cover() const { return open_ && discrete_; }

  /// Max adjacent ratio.
  Rational lipschitz() const { return lipschitz_; }
  /// Least passing L >= 1; nullopt when no L works or the property needs a
  /// branched cover and f is not one.
  std::optional<Rational> constant(Property p) const;
  bool check(Property p, const Rational& L) const;
  /// The LQ ratios restricted to target points near f(x).
  std::optional<Rational> lq_local_constant() const;
  bool check_lq_local(const Rational& L) const;

  std::size_t source_points() const { return pts_.size(); }
  std::size_t target_points() const { return ypts_.size(); }

 private:
  struct Step {
    std::size_t to;
    Rational length;
    EdgeId edge;
    Rational off_from, off_to;
  };

  void build_source_grid(long divisions);
  void build_target_grid(long divisions);
  void scan_adjacent();
  void scan_pointwise();
  void scan_co_lipschitz();
  void scan_coradial();

  GraphMap f_;
  std::vector<GraphPoint> pts_;
  std::vector<GraphPoint> img_;
  std::vector<std::vector<Step>> adj_;
  std::vector<bool> breakpoint_;
  std::vector<bool> interior_break_;
  std::vector<GraphPoint> ypts_;
  Rational y_step_;

  bool open_ = true;
  bool discrete_ = true;
  Rational lipschitz_;
  std::optional<Rational> radial_;
  std::optional<Rational> pointwise_;
  std::optional<Rational> lq_;
  std::optional<Rational> lq_local_;
  std::optional<Rational> coradial_;
};

}  // namespace bldgraph
