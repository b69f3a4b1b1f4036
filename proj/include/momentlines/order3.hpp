#pragma once

// Sufficient-condition solver for 2 <= M, N <= 3 on the symmetric four-line
// family x2 in {-a3, -a2, a2, a3}.
//
// Pipeline: admissible a2 set (base interval intersected with the solution
// sets of three quadratic inequalities), a geometric search for a large
// enough a3, the Vandermonde split, and one two-atom Hamburger solve per line.
// An empty admissible set means the sufficient condition fails; it is not a
// proof of unsolvability.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "momentlines/error.hpp"
#include "momentlines/hamburger.hpp"
#include "momentlines/interval_set.hpp"
#include "momentlines/line_reduction.hpp"
#include "momentlines/measure.hpp"

namespace momentlines {

struct SolverConfig {
  double tol = 1e-9;
  double a3_margin = 1.25;
  double a3_growth = 2.0;
  int a3_max_iters = 200;
  // Values for s_{m,3}, m = 0..3, when the table stops at N = 2.
  std::array<double, 4> completion{0.0, 0.0, 0.0, 0.0};

  void validate() const {
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "config: tol must be > 0");
    if (!(a3_margin > 1.0)) throw Error(ErrorKind::InvalidInput, "config: a3_margin must be > 1");
    if (!(a3_growth > 1.0)) throw Error(ErrorKind::InvalidInput, "config: a3_growth must be > 1");
    if (a3_max_iters < 0) throw Error(ErrorKind::InvalidInput, "config: a3_max_iters must be >= 0");
    for (double v : completion)
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "config: completion value not finite");
    if (!std::isfinite(tol) || !std::isfinite(a3_margin) || !std::isfinite(a3_growth))
      throw Error(ErrorKind::InvalidInput, "config: non-finite parameter");
  }
};

/// The family (-a3, -a2, a2, a3) with 0 < a2 < a3.
struct SymmetricLines {
  double a2;
  double a3;

  LineFamily family() const {
    if (!(a2 > 0.0) || !(a3 > a2))
      throw Error(ErrorKind::InvalidInput, "symmetric lines: need 0 < a2 < a3");
    return LineFamily({-a3, -a2, a2, a3});
  }
};

namespace detail {

inline void require_order_two(const MomentTable& t, std::string_view who) {
  if (t.M() < 2 || t.N() < 2)
    throw Error(ErrorKind::InvalidInput, std::string(who) + ": table needs M >= 2 and N >= 2");
}

}  // namespace detail

/// s00 > 0, s00 s02 - s01^2 > 0 and s00 s20 - s10^2 > 0.
inline bool base_conditions(const MomentTable& t) {
  detail::require_order_two(t, "base_conditions");
  const double s00 = t(0, 0);
  return s00 > 0.0 && s00 * t(0, 2) - t(0, 1) * t(0, 1) > 0.0 &&
         s00 * t(2, 0) - t(1, 0) * t(1, 0) > 0.0;
}

/// (|s01| / s00, sqrt(s02 / s00)).
inline IntervalSet base_interval(const MomentTable& t) {
  detail::require_order_two(t, "base_interval");
  return IntervalSet::open(std::abs(t(0, 1)) / t(0, 0), std::sqrt(t(0, 2) / t(0, 0)));
}

/// (s02 - t s00)(s22 - t s20) - (s12 - t s10)^2 expanded in t = a2^2.
inline Quadratic i1_quadratic(const MomentTable& s) {
  return {s(0, 0) * s(2, 0) - s(1, 0) * s(1, 0),
          -(s(0, 0) * s(2, 2) + s(2, 0) * s(0, 2) - 2.0 * s(1, 0) * s(1, 2)),
          s(0, 2) * s(2, 2) - s(1, 2) * s(1, 2)};
}

/// (a s00 - s01)(a s20 - s21) - (a s10 - s11)^2 expanded in a = a2.
inline Quadratic i2_quadratic(const MomentTable& s) {
  return {s(0, 0) * s(2, 0) - s(1, 0) * s(1, 0),
          -(s(0, 0) * s(2, 1) + s(0, 1) * s(2, 0)) + 2.0 * s(1, 0) * s(1, 1),
          s(0, 1) * s(2, 1) - s(1, 1) * s(1, 1)};
}

/// (a s00 + s01)(a s20 + s21) - (a s10 + s11)^2 expanded in a = a2.
inline Quadratic i3_quadratic(const MomentTable& s) {
  return {s(0, 0) * s(2, 0) - s(1, 0) * s(1, 0),
          s(0, 0) * s(2, 1) + s(0, 1) * s(2, 0) - 2.0 * s(1, 0) * s(1, 1),
          s(0, 1) * s(2, 1) - s(1, 1) * s(1, 1)};
}

inline IntervalSet interval_I1(const MomentTable& t) {
  detail::require_order_two(t, "interval_I1");
  return positive_set(i1_quadratic(t)).map_increasing([](double x) { return std::sqrt(x); });
}

inline IntervalSet interval_I2(const MomentTable& t) {
  detail::require_order_two(t, "interval_I2");
  return positive_set(i2_quadratic(t));
}

inline IntervalSet interval_I3(const MomentTable& t) {
  detail::require_order_two(t, "interval_I3");
  return positive_set(i3_quadratic(t));
}

/// Components narrower than this, relative to their right end, are treated
/// as rounding debris of an empty (tangential) intersection.
inline constexpr double kSliverWidth = 1e-10;

inline IntervalSet intersect_admissible(const IntervalSet& base, const IntervalSet& i1,
                                        const IntervalSet& i2, const IntervalSet& i3) {
  return base.intersect(i1).intersect(i2).intersect(i3).without_slivers(kSliverWidth);
}

inline IntervalSet admissible_a2(const MomentTable& t) {
  return intersect_admissible(base_interval(t), interval_I1(t), interval_I2(t), interval_I3(t));
}

/// Extends an N = 2 table to N = 3 with s_{m,3} = completion[m].
inline MomentTable complete_table(const MomentTable& t, const SolverConfig& cfg) {
  if (t.N() >= 3) return t;
  if (t.N() != 2 || t.M() > 3)
    throw Error(ErrorKind::InvalidInput, "complete_table: expects N = 2 and M <= 3");
  std::vector<double> v;
  v.reserve((t.M() + 1) * 4);
  for (std::size_t m = 0; m <= t.M(); ++m) {
    for (std::size_t n = 0; n <= 2; ++n) v.push_back(t(m, n));
    v.push_back(cfg.completion[m]);
  }
  return MomentTable(t.M(), 3, std::move(v));
}

/// Lower bound for a3 guaranteeing s_0(j) > 0 on all four lines:
/// max(|s03 - a2^2 s01| / (s02 - a2^2 s00),
///     sqrt((a2 s02 + |s03|) / (a2 s00 - |s01|)), a2).
/// Returns +inf when the bound overflows near the right end of the base interval.
inline double a3_lower_bound(const MomentTable& t, double a2) {
  detail::require_order_two(t, "a3_lower_bound");
  if (t.N() < 3)
    throw Error(ErrorKind::PreconditionFailed, "a3_lower_bound: s03 missing; complete the table first");
  const double s00 = t(0, 0), s01 = t(0, 1), s02 = t(0, 2), s03 = t(0, 3);
  const double d1 = s02 - a2 * a2 * s00;
  const double d2 = a2 * s00 - std::abs(s01);
  if (!(d1 > 0.0) || !(d2 > 0.0) || !(s00 > 0.0))
    throw Error(ErrorKind::PreconditionFailed,
                "a3_lower_bound: a2 = " + std::to_string(a2) + " outside (|s01|/s00, sqrt(s02/s00))");
  const double b1 = std::abs(s03 - a2 * a2 * s01) / d1;
  const double b2 = std::sqrt((a2 * s02 + std::abs(s03)) / d2);
  const double bound = std::max({b1, b2, a2});
  return std::isfinite(bound) ? bound : kInf;
}

inline SplitMoments split_symmetric(const MomentTable& t, const SymmetricLines& lines) {
  if (t.N() != 3)
    throw Error(ErrorKind::InvalidInput, "split_symmetric: table must cover n = 0..3");
  return split_moments(t, lines.family());
}

/// Closed-form per-line moments for the symmetric family. Cross-check only:
/// the a3-line formula carries an extra factor (a3 + a2) / (a3 - a2) relative
/// to Cramer's rule.
inline SplitMoments printed_closed_form_split(const MomentTable& t, const SymmetricLines& lines) {
  if (t.N() != 3)
    throw Error(ErrorKind::InvalidInput, "printed_closed_form_split: table must cover n = 0..3");
  const double a2 = lines.a2, a3 = lines.a3;
  const double a1 = -a2;
  const double W = vandermonde_det(lines.family());
  SplitMoments out{t.M(), 3, std::vector<double>((t.M() + 1) * 4), W};
  for (std::size_t m = 0; m <= t.M(); ++m) {
    const double s0 = t(m, 0), s1 = t(m, 1), s2 = t(m, 2), s3 = t(m, 3);
    out.values[m * 4 + 0] = 2.0 * a2 * (a3 - a2) * (a3 + a2) / W *
                            (-a2 * a2 * a3 * s0 + a2 * a2 * s1 + a3 * s2 - s3);
    out.values[m * 4 + 1] = -(a2 + a3) * (a3 - a2) * 2.0 * a3 / W *
                            (-a3 * a3 * a2 * s0 + a3 * a3 * s1 + a2 * s2 - s3);
    out.values[m * 4 + 2] = (a1 + a3) * (a3 + a2) * 2.0 * a3 / W *
                            (a2 * a3 * a3 * s0 + a3 * a3 * s1 - a2 * s2 - s3);
    out.values[m * 4 + 3] = -(a2 + a3) * 2.0 * a2 * (a2 + a3) / W *
                            (a3 * a2 * a2 * s0 + a2 * a2 * s1 - a3 * s2 - s3);
  }
  return out;
}

/// Per line j, max over m of |closed - cramer| relative to max_j |cramer(m, .)|.
inline std::array<double, 4> closed_form_deviation(const SplitMoments& closed,
                                                   const SplitMoments& cramer) {
  std::array<double, 4> dev{0.0, 0.0, 0.0, 0.0};
  for (std::size_t m = 0; m <= cramer.M; ++m) {
    double scale = 0.0;
    for (std::size_t j = 0; j < 4; ++j) scale = std::max(scale, std::abs(cramer(m, j)));
    if (scale == 0.0) scale = 1.0;
    for (std::size_t j = 0; j < 4; ++j)
      dev[j] = std::max(dev[j], std::abs(closed(m, j) - cramer(m, j)) / scale);
  }
  return dev;
}

struct A3Attempt {
  double a3;
  bool passed;
  std::vector<HamburgerVerdict> verdicts;  // empty if the split itself failed
  std::string note;
};

/// All eight per-line conditions s_0(j) > 0, s_0(j) s_2(j) - s_1(j)^2 > 0 at
/// the given a3, judged by hamburger_check on the exact split.
inline A3Attempt test_a3(const MomentTable& completed, double a2, double a3) {
  A3Attempt at{a3, false, {}, {}};
  try {
    const SplitMoments split = split_symmetric(completed, {a2, a3});
    bool ok = true;
    for (std::size_t j = 0; j < 4; ++j) {
      const HamburgerVerdict v = hamburger_check(HamburgerData(split.line_moments(j)));
      at.verdicts.push_back(v);
      ok = ok && v.kind == HamburgerKind::SolvableStrict && v.mass > 0.0 && v.hankel > 0.0;
    }
    at.passed = ok;
  } catch (const Error& e) {
    at.note = e.what();
  }
  return at;
}

namespace detail {

inline std::optional<double> search_a3_traced(const MomentTable& completed, double a2,
                                              const SolverConfig& cfg, std::vector<A3Attempt>& trace) {
  const double lower = a3_lower_bound(completed, a2);
  double a3 = cfg.a3_margin * lower;
  for (int i = 0; i <= cfg.a3_max_iters && std::isfinite(a3); ++i) {
    trace.push_back(test_a3(completed, a2, a3));
    if (trace.back().passed) return a3;
    a3 *= cfg.a3_growth;
  }
  return std::nullopt;
}

}  // namespace detail

struct A3Search {
  double a3;
  std::vector<A3Attempt> trace;
};

/// Geometric search upward from a3_margin * a3_lower_bound. The limit
/// a3 -> inf turns the per-line Hankel conditions into the three quadratic
/// inequalities, so a2 inside the admissible set guarantees termination in
/// exact arithmetic. Throws SearchExhausted otherwise.
inline A3Search search_a3(const MomentTable& table, double a2, const SolverConfig& cfg = {}) {
  cfg.validate();
  if (!base_conditions(table))
    throw Error(ErrorKind::PreconditionFailed, "search_a3: base conditions fail");
  if (!admissible_a2(table).contains(a2))
    throw Error(ErrorKind::PreconditionFailed,
                "search_a3: a2 = " + std::to_string(a2) + " not in the admissible set");
  const MomentTable completed = complete_table(table, cfg);
  A3Search out{0.0, {}};
  const std::optional<double> a3 = detail::search_a3_traced(completed, a2, cfg, out.trace);
  if (!a3)
    throw Error(ErrorKind::SearchExhausted,
                "search_a3: no passing a3 after " + std::to_string(out.trace.size()) +
                    " candidates (last " +
                    (out.trace.empty() ? std::string("none") : std::to_string(out.trace.back().a3)) +
                    ")");
  out.a3 = *a3;
  return out;
}

enum class Order3Verdict { Solved, SufficientConditionFails, SearchExhausted, NumericalFailure };

inline std::string_view to_string(Order3Verdict v) {
  switch (v) {
    case Order3Verdict::Solved: return "solved";
    case Order3Verdict::SufficientConditionFails: return "sufficient_condition_fails";
    case Order3Verdict::SearchExhausted: return "search_exhausted";
    case Order3Verdict::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

struct Order3Report {
  Order3Verdict verdict = Order3Verdict::SufficientConditionFails;
  std::string reason;
  bool base_ok = false;
  IntervalSet base;
  IntervalSet I1, I2, I3;
  IntervalSet admissible;
  std::optional<double> a2;
  std::optional<double> a3_lower;
  std::optional<double> a3;
  std::vector<A3Attempt> a3_trace;
  std::optional<SplitMoments> split;
  std::vector<HamburgerVerdict> line_verdicts;
  // Relative deviation of the printed closed forms from Cramer, per line.
  std::array<double, 4> closed_form_deviation{kNaN, kNaN, kNaN, kNaN};
  double residual = kNaN;

  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
};

struct Order3Result {
  std::optional<AtomicMeasure2D> measure;
  Order3Report report;
};

/// a2 inside the widest admissible component: its midpoint, clipped 1% of
/// the component width away from either endpoint.
inline double choose_a2(const IntervalSet& admissible) {
  const Interval& w = admissible.widest();
  const double margin = 0.01 * w.width();
  return std::clamp(0.5 * (w.lo + w.hi), w.lo + margin, w.hi - margin);
}

inline Order3Result solve_order3(const MomentTable& table, const SolverConfig& cfg = {}) {
  cfg.validate();
  if (table.M() < 2 || table.M() > 3 || table.N() < 2 || table.N() > 3)
    throw Error(ErrorKind::InvalidInput, "solve_order3: requires M, N in {2, 3}");

  Order3Result out;
  Order3Report& rep = out.report;
  const MomentTable completed = complete_table(table, cfg);

  rep.base_ok = base_conditions(completed);
  if (!rep.base_ok) {
    rep.verdict = Order3Verdict::SufficientConditionFails;
    rep.reason = "base conditions fail: need s00 > 0, s00*s02 - s01^2 > 0, s00*s20 - s10^2 > 0";
    return out;
  }
  rep.base = base_interval(completed);
  rep.I1 = interval_I1(completed);
  rep.I2 = interval_I2(completed);
  rep.I3 = interval_I3(completed);
  rep.admissible = intersect_admissible(rep.base, rep.I1, rep.I2, rep.I3);
  if (rep.admissible.empty()) {
    rep.verdict = Order3Verdict::SufficientConditionFails;
    rep.reason = "admissible a2 set is empty";
    return out;
  }

  const double a2 = choose_a2(rep.admissible);
  rep.a2 = a2;
  rep.a3_lower = a3_lower_bound(completed, a2);
  const std::optional<double> a3 = detail::search_a3_traced(completed, a2, cfg, rep.a3_trace);
  if (!a3) {
    rep.verdict = Order3Verdict::SearchExhausted;
    rep.reason = "no a3 passed the per-line conditions within " +
                 std::to_string(cfg.a3_max_iters) + " growth steps";
    return out;
  }
  rep.a3 = *a3;

  const SymmetricLines lines{a2, *a3};
  try {
    const SplitMoments split = split_symmetric(completed, lines);
    rep.split = split;
    rep.closed_form_deviation =
        closed_form_deviation(printed_closed_form_split(completed, lines), split);
    LineSolution sol = solve_split(split, lines.family());
    rep.line_verdicts = sol.verdicts;
    rep.residual = residual(table, sol.measure);
    if (!(rep.residual <= residual_bound(table, cfg.tol))) {
      rep.verdict = Order3Verdict::NumericalFailure;
      rep.reason = "residual " + std::to_string(rep.residual) + " exceeds tolerance";
      return out;
    }
    out.measure = std::move(sol.measure);
  } catch (const Error& e) {
    rep.verdict = Order3Verdict::NumericalFailure;
    rep.reason = e.what();
    return out;
  }
  rep.verdict = Order3Verdict::Solved;
  return out;
}

}  // namespace momentlines
