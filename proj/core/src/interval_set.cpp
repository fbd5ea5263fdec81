#include "bldgraph/interval_set.hpp"

#include <algorithm>
#include <sstream>

namespace bldgraph {

bool Interval::contains(const Rational& t) const {
  if (t < lo || t > hi) return false;
  if (t == lo && !lo_closed) return false;
  if (t == hi && !hi_closed) return false;
  return true;
}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

void IntervalSet::normalize() {
  std::erase_if(parts_, [](const Interval& i) { return i.empty(); });
  std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  std::vector<Interval> out;
  for (const auto& cur : parts_) {
    if (out.empty()) {
      out.push_back(cur);
      continue;
    }
    Interval& last = out.back();
    // Mergeable when overlapping, or touching at a point one of them owns.
    const bool overlaps = cur.lo < last.hi;
    const bool touches = cur.lo == last.hi && (cur.lo_closed || last.hi_closed);
    if (overlaps || touches) {
      if (cur.hi > last.hi) {
        last.hi = cur.hi;
        last.hi_closed = cur.hi_closed;
      } else if (cur.hi == last.hi) {
        last.hi_closed = last.hi_closed || cur.hi_closed;
      }
      if (cur.lo == last.lo) last.lo_closed = last.lo_closed || cur.lo_closed;
    } else {
      out.push_back(cur);
    }
  }
  parts_ = std::move(out);
}

bool IntervalSet::contains(const Rational& t) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& i) { return i.contains(t); });
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  std::vector<Interval> out;
  for (const auto& a : parts_) {
    for (const auto& b : o.parts_) {
      Interval c;
      if (a.lo > b.lo) {
        c.lo = a.lo;
        c.lo_closed = a.lo_closed;
      } else if (b.lo > a.lo) {
        c.lo = b.lo;
        c.lo_closed = b.lo_closed;
      } else {
        c.lo = a.lo;
        c.lo_closed = a.lo_closed && b.lo_closed;
      }
      if (a.hi < b.hi) {
        c.hi = a.hi;
        c.hi_closed = a.hi_closed;
      } else if (b.hi < a.hi) {
        c.hi = b.hi;
        c.hi_closed = b.hi_closed;
      } else {
        c.hi = a.hi;
        c.hi_closed = a.hi_closed && b.hi_closed;
      }
      if (!c.empty()) out.push_back(c);
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement_in(const Interval& universe) const {
  std::vector<Interval> out;
  Rational cursor = universe.lo;
  bool cursor_closed = universe.lo_closed;
  for (const auto& p : parts_) {
    out.push_back(Interval{cursor, p.lo, cursor_closed, !p.lo_closed});
    cursor = p.hi;
    cursor_closed = !p.hi_closed;
  }
  out.push_back(Interval{cursor, universe.hi, cursor_closed, universe.hi_closed});
  return IntervalSet(std::move(out)).intersect(IntervalSet::of(universe));
}

bool IntervalSet::is_subset_of(const IntervalSet& o) const { return intersect(o) == *this; }

IntervalSet IntervalSet::affine_image(const Rational& a, const Rational& b) const {
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    if (a.is_zero()) {
      out.push_back(Interval{b, b, true, true});
    } else if (a.sign() > 0) {
      out.push_back(Interval{a * p.lo + b, a * p.hi + b, p.lo_closed, p.hi_closed});
    } else {
      out.push_back(Interval{a * p.hi + b, a * p.lo + b, p.hi_closed, p.lo_closed});
    }
  }
  return IntervalSet(std::move(out));
}

std::vector<Rational> IntervalSet::endpoints() const {
  std::vector<Rational> out;
  for (const auto& p : parts_) {
    out.push_back(p.lo);
    out.push_back(p.hi);
  }
  return out;
}

std::string IntervalSet::str() const {
  std::ostringstream os;
  if (parts_.empty()) return "{}";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const auto& p = parts_[i];
    if (i) os << " u ";
    os << (p.lo_closed ? '[' : '(') << p.lo << ", " << p.hi << (p.hi_closed ? ']' : ')');
  }
  return os.str();
}

}  // namespace bldgraph
