#pragma once

#include "bldgraph/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bldgraph {

/// An interval of the real line with independently open/closed ends.
struct Interval {
  Rational lo;
  Rational hi;
  bool lo_closed = true;
  bool hi_closed = true;

  bool empty() const { return hi < lo || (lo == hi && !(lo_closed && hi_closed)); }
  bool contains(const Rational& t) const;
  bool is_point() const { return lo == hi && lo_closed && hi_closed; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of intervals, kept normalized: sorted, pairwise disjoint, and
/// no two members whose union is itself an interval.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> parts);

  static IntervalSet of(const Interval& i) { return IntervalSet({i}); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(const Rational& t) const;

  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet intersect(const IntervalSet& o) const;
  /// Complement relative to `universe`.
  IntervalSet complement_in(const Interval& universe) const;
  IntervalSet subtract(const IntervalSet& o, const Interval& universe) const {
    return intersect(o.complement_in(universe));
  }
  bool is_subset_of(const IntervalSet& o) const;

  /// Image under t -> a*t + b (a may be negative; a == 0 collapses to a point).
  IntervalSet affine_image(const Rational& a, const Rational& b) const;

  /// Every finite endpoint of every member.
  std::vector<Rational> endpoints() const;

  std::string str() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize();
  std::vector<Interval> parts_;
};

}  // namespace bldgraph
