#pragma once

// Finite unions of open intervals on (0, +inf), and the exact solution set of
// a quadratic inequality restricted to the positive half-line.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace momentlines {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi); hi may be +inf.
struct Interval {
  double lo;
  double hi;

  bool contains(double x) const noexcept { return lo < x && x < hi; }
  double width() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, disjoint, non-empty open intervals. Touching components such as
/// (0, 1) and (1, 2) stay separate: the shared endpoint is excluded.
class IntervalSet {
 public:
  IntervalSet() = default;

  explicit IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

  static IntervalSet open(double lo, double hi) { return IntervalSet({{lo, hi}}); }
  static IntervalSet positive_half_line() { return open(0.0, kInf); }

  const std::vector<Interval>& components() const noexcept { return parts_; }
  bool empty() const noexcept { return parts_.empty(); }

  bool contains(double x) const noexcept {
    return std::any_of(parts_.begin(), parts_.end(), [x](const Interval& i) { return i.contains(x); });
  }

  IntervalSet intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    for (const Interval& a : parts_)
      for (const Interval& b : other.parts_) {
        const double lo = std::max(a.lo, b.lo);
        const double hi = std::min(a.hi, b.hi);
        if (lo < hi) out.push_back({lo, hi});
      }
    return IntervalSet(std::move(out));
  }

  /// Component of greatest width; requires a non-empty set.
  const Interval& widest() const {
    return *std::max_element(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
      return a.width() < b.width();
    });
  }

  /// Drops bounded components with width <= rel * |hi|.
  IntervalSet without_slivers(double rel) const {
    std::vector<Interval> out;
    for (const Interval& i : parts_)
      if (i.hi == kInf || i.width() > rel * std::abs(i.hi)) out.push_back(i);
    return IntervalSet(std::move(out));
  }

  /// Image under a strictly increasing map (endpoints mapped individually).
  template <class F>
  IntervalSet map_increasing(F f) const {
    std::vector<Interval> out;
    out.reserve(parts_.size());
    for (const Interval& i : parts_) out.push_back({f(i.lo), f(i.hi)});
    return IntervalSet(std::move(out));
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize() {
    parts_.erase(std::remove_if(parts_.begin(), parts_.end(),
                                [](const Interval& i) { return !(i.lo < i.hi); }),
                 parts_.end());
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& i : parts_) {
      if (!merged.empty() && i.lo < merged.back().hi)
        merged.back().hi = std::max(merged.back().hi, i.hi);
      else
        merged.push_back(i);
    }
    parts_ = std::move(merged);
  }

  std::vector<Interval> parts_;
};

/// "(0, 0.577350) U (0.577350, inf)"; "{}" for the empty set.
inline std::string to_string(const IntervalSet& set) {
  if (set.empty()) return "{}";
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  bool first = true;
  for (const Interval& i : set.components()) {
    if (!first) os << " ∪ ";
    first = false;
    os << "(" << i.lo << ", ";
    if (std::isinf(i.hi))
      os << "∞";
    else
      os << i.hi;
    os << ")";
  }
  return os.str();
}

struct Quadratic {
  double a;  // x^2
  double b;  // x
  double c;  // 1

  double operator()(double x) const noexcept { return (a * x + b) * x + c; }
};

/// {x > 0 : q(x) > 0}. A discriminant within a relative 1e-12 band of zero is
/// treated as a double root, so the touching point is excluded.
inline IntervalSet positive_set(const Quadratic& q) {
  const IntervalSet half = IntervalSet::positive_half_line();
  if (q.a == 0.0) {
    if (q.b == 0.0) return q.c > 0.0 ? half : IntervalSet{};
    const double root = -q.c / q.b;
    return q.b > 0.0 ? half.intersect(IntervalSet::open(root, kInf))
                     : half.intersect(IntervalSet::open(-kInf, root));
  }

  const double disc = q.b * q.b - 4.0 * q.a * q.c;
  const double band = 1e-12 * (q.b * q.b + 4.0 * std::abs(q.a * q.c));
  if (std::abs(disc) <= band) {
    if (q.a < 0.0) return {};
    const double root = -q.b / (2.0 * q.a);
    return half.intersect(IntervalSet({{-kInf, root}, {root, kInf}}));
  }
  if (disc < 0.0) return q.a > 0.0 ? half : IntervalSet{};

  // Cancellation-free roots: the larger-magnitude one first, then Vieta.
  const double t = -0.5 * (q.b + std::copysign(std::sqrt(disc), q.b));
  double r1 = t / q.a;
  double r2 = t != 0.0 ? q.c / t : -r1;
  if (r1 > r2) std::swap(r1, r2);
  if (q.a > 0.0) return half.intersect(IntervalSet({{-kInf, r1}, {r2, kInf}}));
  return half.intersect(IntervalSet::open(r1, r2));
}

}  // namespace momentlines
