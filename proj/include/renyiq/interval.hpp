#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace renyiq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Half-open interval (lo, hi]. Either endpoint may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  static constexpr Interval real_line() { return {-kInf, kInf}; }

  bool contains(double x) const { return x > lo && x <= hi; }
  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool empty() const { return !(lo < hi); }
  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// Finite union of pairwise disjoint intervals, e.g. the complement of (c, d].
using Region = std::vector<Interval>;

inline Region complement(const Interval& i) {
  Region out;
  if (std::isfinite(i.lo)) out.push_back({-kInf, i.lo});
  if (std::isfinite(i.hi)) out.push_back({i.hi, kInf});
  return out;
}

}  // namespace renyiq
