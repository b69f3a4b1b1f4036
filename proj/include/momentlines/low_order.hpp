#pragma once

// Complete classification and construction for the (M, N) = (1, 1) and
// (1, 2) problems.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "momentlines/error.hpp"
#include "momentlines/line_reduction.hpp"
#include "momentlines/measure.hpp"

namespace momentlines {

enum class CaseM1N1 { CaseI_Zero, CaseII_Positive, Unsolvable };

inline std::string_view to_string(CaseM1N1 c) {
  switch (c) {
    case CaseM1N1::CaseI_Zero: return "I_zero";
    case CaseM1N1::CaseII_Positive: return "II_positive";
    case CaseM1N1::Unsolvable: return "unsolvable";
  }
  return "unknown";
}

inline CaseM1N1 classify_m1n1(const MomentTable& t) {
  if (t.M() != 1 || t.N() != 1)
    throw Error(ErrorKind::InvalidInput, "classify_m1n1: table must be 2x2");
  if (t.all_zero()) return CaseM1N1::CaseI_Zero;
  if (t(0, 0) > 0.0) return CaseM1N1::CaseII_Positive;
  return CaseM1N1::Unsolvable;
}

/// Lines s01/s00 -+ 1; both per-line masses equal s00/2.
inline LineFamily lines_m1n1(const MomentTable& t) {
  const double c = t(0, 1) / t(0, 0);
  return LineFamily({c - 1.0, c + 1.0});
}

inline AtomicMeasure2D solve_m1n1(const MomentTable& t) {
  switch (classify_m1n1(t)) {
    case CaseM1N1::CaseI_Zero: return {};
    case CaseM1N1::Unsolvable:
      throw Error(ErrorKind::PreconditionFailed, "solve_m1n1: moment data is unsolvable");
    case CaseM1N1::CaseII_Positive: break;
  }
  AtomicMeasure2D mu = solve_on_lines(t, lines_m1n1(t));
  const double r = residual(t, mu);
  if (!(r <= residual_bound(t, 1e-10)))
    throw Error(ErrorKind::NumericalFailure, "solve_m1n1: residual " + std::to_string(r));
  return mu;
}

enum class CaseM1N2 { CaseA_Zero, CaseB_Rank1, CaseC_PD, Unsolvable };

inline std::string_view to_string(CaseM1N2 c) {
  switch (c) {
    case CaseM1N2::CaseA_Zero: return "A_zero";
    case CaseM1N2::CaseB_Rank1: return "B_rank1";
    case CaseM1N2::CaseC_PD: return "C_pd";
    case CaseM1N2::Unsolvable: return "unsolvable";
  }
  return "unknown";
}

struct ClassificationM1N2 {
  CaseM1N2 tag;
  std::optional<double> alpha;  // set only for CaseB_Rank1
  std::string diagnostic;
};

inline ClassificationM1N2 classify_m1n2(const MomentTable& t) {
  if (t.M() != 1 || t.N() != 2)
    throw Error(ErrorKind::InvalidInput, "classify_m1n2: table must be 2x3");
  if (t.all_zero()) return {CaseM1N2::CaseA_Zero, std::nullopt, {}};

  const double s00 = t(0, 0), s01 = t(0, 1), s02 = t(0, 2);
  if (!(s00 > 0.0))
    return {CaseM1N2::Unsolvable, std::nullopt, "s00 <= 0 with nonzero moments"};

  const double h = s00 * s02 - s01 * s01;
  if (std::abs(h) > hankel_boundary_band(s00, s01, s02)) {
    if (h > 0.0) return {CaseM1N2::CaseC_PD, std::nullopt, {}};
    return {CaseM1N2::Unsolvable, std::nullopt,
            "s00*s02 - s01^2 = " + std::to_string(h) + " < 0 (Gram matrix of 1, x2 not PSD)"};
  }

  // Rank one: the measure lives on x2 = alpha, so s_{m,n} = alpha^n s_{m,0}.
  const double alpha = s01 / s00;
  const double tol = 1e-9 * t.max_abs();
  for (std::size_t m = 0; m <= 1; ++m)
    for (std::size_t n = 1; n <= 2; ++n) {
      const double expected = detail::ipow(alpha, n) * t(m, 0);
      if (std::abs(t(m, n) - expected) > tol)
        return {CaseM1N2::Unsolvable, std::nullopt,
                "rank-one data violates s_{m,n} = alpha^n s_{m,0} at s" + std::to_string(m) +
                    std::to_string(n) + " (alpha = " + std::to_string(alpha) + ")"};
    }
  return {CaseM1N2::CaseB_Rank1, alpha, {}};
}

/// Case (c) lines: a2 = 2 sqrt(s02/s00), a1 = s01/s00, a0 = -a2.
inline LineFamily lines_m1n2(const MomentTable& t) {
  const double a2 = 2.0 * std::sqrt(t(0, 2) / t(0, 0));
  return LineFamily({-a2, t(0, 1) / t(0, 0), a2});
}

/// The three expressions whose positivity is equivalent to s_0(j) > 0 on the
/// case (c) lines, in line order j = 0, 1, 2.
inline std::array<double, 3> case_c_inequalities(const MomentTable& t, const LineFamily& lines) {
  const double s00 = t(0, 0), s01 = t(0, 1), s02 = t(0, 2);
  const double a1 = lines[1], a2 = lines[2];
  return {a1 * a2 * s00 - (a1 + a2) * s01 + s02,
          a2 * a2 * s00 - s02,
          -a1 * a2 * s00 - (a1 - a2) * s01 + s02};
}

inline AtomicMeasure2D solve_m1n2(const MomentTable& t) {
  const ClassificationM1N2 c = classify_m1n2(t);
  switch (c.tag) {
    case CaseM1N2::CaseA_Zero: return {};
    case CaseM1N2::Unsolvable:
      throw Error(ErrorKind::PreconditionFailed, "solve_m1n2: " + c.diagnostic);
    case CaseM1N2::CaseB_Rank1:
      return AtomicMeasure2D({{t(1, 0) / t(0, 0), *c.alpha, t(0, 0)}});
    case CaseM1N2::CaseC_PD: break;
  }

  const LineFamily lines = lines_m1n2(t);
  for (double q : case_c_inequalities(t, lines))
    if (!(q > 0.0))
      throw Error(ErrorKind::InternalAssertion,
                  "solve_m1n2: case (c) line positivity failed (" + std::to_string(q) + ")");

  AtomicMeasure2D mu = solve_on_lines(t, lines);
  const double r = residual(t, mu);
  if (!(r <= residual_bound(t, 1e-9)))
    throw Error(ErrorKind::NumericalFailure, "solve_m1n2: residual " + std::to_string(r));
  return mu;
}

}  // namespace momentlines
