#pragma once

// Truncated Hamburger moment problems of order M <= 3: a solvability verdict
// based on s_0 and the Hankel quantity s_0 s_2 - s_1^2, and explicit atomic
// solutions with at most two nodes (Gauss quadrature from moments).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "momentlines/error.hpp"
#include "momentlines/measure.hpp"

namespace momentlines {

/// Moments s_0..s_M of a measure on R, with M in 0..3.
class HamburgerData {
 public:
  explicit HamburgerData(std::vector<double> s) : s_(std::move(s)) {
    if (s_.empty() || s_.size() > 4)
      throw Error(ErrorKind::InvalidInput,
                  "hamburger data: expected 1 to 4 moments, got " + std::to_string(s_.size()));
    for (double v : s_)
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "hamburger data: non-finite moment");
  }

  std::size_t M() const noexcept { return s_.size() - 1; }
  double operator[](std::size_t m) const noexcept { return s_[m]; }
  const std::vector<double>& values() const noexcept { return s_; }

 private:
  std::vector<double> s_;
};

enum class HamburgerKind { ZeroMeasure, SolvableStrict, Inconclusive, Unsolvable };

inline std::string_view to_string(HamburgerKind k) {
  switch (k) {
    case HamburgerKind::ZeroMeasure: return "zero_measure";
    case HamburgerKind::SolvableStrict: return "solvable_strict";
    case HamburgerKind::Inconclusive: return "inconclusive";
    case HamburgerKind::Unsolvable: return "unsolvable";
  }
  return "unknown";
}

struct HamburgerVerdict {
  HamburgerKind kind;
  double mass;    // s_0
  double hankel;  // s_0 s_2 - s_1^2, NaN when M < 2
};

/// Width of the band |s_0 s_2 - s_1^2| <= band treated as the rank-one boundary.
/// Purely relative, so the verdict is invariant under positive rescaling.
inline double hankel_boundary_band(double s0, double s1, double s2) {
  return 1e-12 * std::max(std::abs(s0 * s2), s1 * s1);
}

inline HamburgerVerdict hamburger_check(const HamburgerData& data) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double s0 = data[0];
  const double h = data.M() >= 2 ? s0 * data[2] - data[1] * data[1] : nan;

  const auto& v = data.values();
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
    return {HamburgerKind::ZeroMeasure, s0, h};
  // s_0 = 0 forces the zero measure, which contradicts a nonzero moment.
  if (s0 <= 0.0) return {HamburgerKind::Unsolvable, s0, h};
  if (data.M() <= 1) return {HamburgerKind::SolvableStrict, s0, h};

  if (std::abs(h) <= hankel_boundary_band(s0, data[1], data[2]))
    return {HamburgerKind::Inconclusive, s0, h};
  if (h < 0.0) return {HamburgerKind::Unsolvable, s0, h};
  return {HamburgerKind::SolvableStrict, s0, h};
}

namespace detail {

inline void require_solvable(const HamburgerVerdict& v, std::string_view who) {
  if (v.kind == HamburgerKind::ZeroMeasure || v.kind == HamburgerKind::SolvableStrict) return;
  throw Error(ErrorKind::PreconditionFailed,
              std::string(who) + ": verdict is " + std::string(to_string(v.kind)));
}

}  // namespace detail

/// One atom at s_1/s_0 (at 0 when M = 0) carrying mass s_0.
inline AtomicMeasure1D solve_one_atom(const HamburgerData& data) {
  if (data.M() > 1) throw Error(ErrorKind::InvalidInput, "solve_one_atom: requires M <= 1");
  const HamburgerVerdict v = hamburger_check(data);
  detail::require_solvable(v, "solve_one_atom");
  if (v.kind == HamburgerKind::ZeroMeasure) return {};
  const double x = data.M() == 1 ? data[1] / data[0] : 0.0;
  return AtomicMeasure1D({{x, data[0]}});
}

/// Two-node measure matching s_0..s_M for M in {2, 3}.
///
/// M = 2 leaves s_3 free and uses the symmetric pair mean +- stddev with equal
/// weights. M = 3 builds the degree-2 orthogonal polynomial x^2 - beta x - gamma
/// from the Hankel system and places the nodes at its roots; the Hankel
/// quantity being strictly positive makes the roots real and distinct and both
/// weights positive.
inline AtomicMeasure1D solve_two_atoms(const HamburgerData& data) {
  if (data.M() < 2) throw Error(ErrorKind::InvalidInput, "solve_two_atoms: requires M in {2,3}");
  const HamburgerVerdict v = hamburger_check(data);
  detail::require_solvable(v, "solve_two_atoms");
  if (v.kind == HamburgerKind::ZeroMeasure) return {};

  const double s0 = data[0], s1 = data[1], s2 = data[2];
  const double h = v.hankel;

  if (data.M() == 2) {
    const double mean = s1 / s0;
    const double sd = std::sqrt(h) / s0;
    return AtomicMeasure1D({{mean - sd, 0.5 * s0}, {mean + sd, 0.5 * s0}});
  }

  const double s3 = data[3];
  const double gamma = (s2 * s2 - s1 * s3) / h;
  const double beta = (s0 * s3 - s1 * s2) / h;
  const double disc = beta * beta + 4.0 * gamma;
  if (!(disc > 1e-14 * (beta * beta + 4.0 * std::abs(gamma))))
    throw Error(ErrorKind::NumericalFailure,
                "solve_two_atoms: near-degenerate Hankel data (discriminant " +
                    std::to_string(disc) + ")");

  const double root = std::sqrt(disc);
  const double q = 0.5 * (beta + std::copysign(root, beta));
  double x_lo = q;
  double x_hi = -gamma / q;
  if (x_lo > x_hi) std::swap(x_lo, x_hi);

  const double gap = x_hi - x_lo;
  const double w_lo = (s0 * x_hi - s1) / gap;
  const double w_hi = (s1 - s0 * x_lo) / gap;
  if (!(w_lo > 0.0) || !(w_hi > 0.0) || !(gap > 0.0))
    throw Error(ErrorKind::NumericalFailure, "solve_two_atoms: quadrature weights lost positivity");
  return AtomicMeasure1D({{x_lo, w_lo}, {x_hi, w_hi}});
}

/// Dispatch by order: one atom for M <= 1, two atoms otherwise.
inline AtomicMeasure1D solve_hamburger(const HamburgerData& data) {
  return data.M() <= 1 ? solve_one_atom(data) : solve_two_atoms(data);
}

}  // namespace momentlines
