#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "momentlines/hamburger.hpp"
#include "test_support.hpp"

namespace ml = momentlines;
using ml::HamburgerData;
using ml::HamburgerKind;

namespace {

std::vector<double> moments_of(const ml::AtomicMeasure1D& s, std::size_t M) {
  std::vector<double> out;
  for (std::size_t m = 0; m <= M; ++m) out.push_back(ml::moment_1d(s, m));
  return out;
}

ml::ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const ml::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an ml::Error";
  return ml::ErrorKind::InternalAssertion;
}

}  // namespace

TEST(HamburgerCheck, Examples) {
  EXPECT_EQ(ml::hamburger_check(HamburgerData({0, 0, 0})).kind, HamburgerKind::ZeroMeasure);

  const auto strict = ml::hamburger_check(HamburgerData({1, 0, 1, 0}));
  EXPECT_EQ(strict.kind, HamburgerKind::SolvableStrict);
  EXPECT_EQ(strict.mass, 1.0);
  EXPECT_EQ(strict.hankel, 1.0);

  const auto boundary = ml::hamburger_check(HamburgerData({1, 1, 1}));
  EXPECT_EQ(boundary.kind, HamburgerKind::Inconclusive);
  EXPECT_EQ(boundary.hankel, 0.0);
}

TEST(HamburgerCheck, UnsolvableCases) {
  EXPECT_EQ(ml::hamburger_check(HamburgerData({-1})).kind, HamburgerKind::Unsolvable);
  EXPECT_EQ(ml::hamburger_check(HamburgerData({0, 1})).kind, HamburgerKind::Unsolvable);
  EXPECT_EQ(ml::hamburger_check(HamburgerData({0, 0, 0, 1})).kind, HamburgerKind::Unsolvable);
  EXPECT_EQ(ml::hamburger_check(HamburgerData({1, 2, 1})).kind, HamburgerKind::Unsolvable);
}

TEST(HamburgerCheck, LowOrderNeedsOnlyPositiveMass) {
  EXPECT_EQ(ml::hamburger_check(HamburgerData({3})).kind, HamburgerKind::SolvableStrict);
  EXPECT_EQ(ml::hamburger_check(HamburgerData({2, -7})).kind, HamburgerKind::SolvableStrict);
  EXPECT_TRUE(std::isnan(ml::hamburger_check(HamburgerData({2, -7})).hankel));
}

TEST(HamburgerData, RejectsBadInput) {
  EXPECT_EQ(kind_of([] { HamburgerData({1, NAN}); }), ml::ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { HamburgerData({}); }), ml::ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { HamburgerData({1, 0, 1, 0, 1}); }), ml::ErrorKind::InvalidInput);
}

TEST(SolveOneAtom, Examples) {
  const auto a = ml::solve_one_atom(HamburgerData({2, 4}));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.atoms()[0], (ml::Atom1D{2, 2}));
  EXPECT_TRUE(ml::solve_one_atom(HamburgerData({0, 0})).empty());
  const auto c = ml::solve_one_atom(HamburgerData({3}));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.atoms()[0], (ml::Atom1D{0, 3}));
  EXPECT_EQ(kind_of([] { ml::solve_one_atom(HamburgerData({0, 1})); }),
            ml::ErrorKind::PreconditionFailed);
}

TEST(SolveTwoAtoms, Examples) {
  const auto s = ml::solve_two_atoms(HamburgerData({1, 0, 1, 0}));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.atoms()[0].x, -1.0, 1e-15);
  EXPECT_NEAR(s.atoms()[0].w, 0.5, 1e-15);
  EXPECT_NEAR(s.atoms()[1].x, 1.0, 1e-15);
  EXPECT_NEAR(s.atoms()[1].w, 0.5, 1e-15);

  const auto t = ml::solve_two_atoms(HamburgerData({2, 0, 2.0 / 3.0}));
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(t.atoms()[0].x, -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(t.atoms()[1].x, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(t.atoms()[0].w, 1.0);
  EXPECT_EQ(t.atoms()[1].w, 1.0);

  EXPECT_TRUE(ml::solve_two_atoms(HamburgerData({0, 0, 0, 0})).empty());
}

TEST(SolveTwoAtoms, BoundaryAndUnsolvableAreRefused) {
  EXPECT_EQ(kind_of([] { ml::solve_two_atoms(HamburgerData({1, 1, 1, 1})); }),
            ml::ErrorKind::PreconditionFailed);
  EXPECT_EQ(kind_of([] { ml::solve_two_atoms(HamburgerData({1, 2, 1})); }),
            ml::ErrorKind::PreconditionFailed);
  EXPECT_EQ(kind_of([] { ml::solve_two_atoms(HamburgerData({1, 0})); }), ml::ErrorKind::InvalidInput);
}

TEST(SolveTwoAtoms, ThirdMomentIsFreeForOrderTwo) {
  // The symmetric construction fixes s_3 = s_0 (mean^3 + 3 mean var).
  const double s0 = 2.0, s1 = 1.0, s2 = 3.0;
  const auto sig = ml::solve_two_atoms(HamburgerData({s0, s1, s2}));
  const double mean = s1 / s0, var = s2 / s0 - mean * mean;
  EXPECT_NEAR(ml::moment_1d(sig, 3), s0 * (mean * mean * mean + 3 * mean * var), 1e-12);
}

TEST(SolveTwoAtoms, RandomTwoAtomMeasuresAreRecovered) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> w(0.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto xs = ml::testing::separated_points(rng, 2, -10.0, 10.0, 0.05);
    double w0 = 0, w1 = 0;
    while (w0 <= 0) w0 = w(rng);
    while (w1 <= 0) w1 = w(rng);
    const ml::AtomicMeasure1D gen({{xs[0], w0}, {xs[1], w1}});
    const auto s = moments_of(gen, 3);
    const HamburgerData data(s);
    ASSERT_EQ(ml::hamburger_check(data).kind, HamburgerKind::SolvableStrict) << trial;
    const auto rec = ml::solve_two_atoms(data);
    ASSERT_EQ(rec.size(), 2u);
    double scale = 0.0;
    for (double v : s) scale = std::max(scale, std::abs(v));
    for (std::size_t m = 0; m <= 3; ++m)
      EXPECT_LE(std::abs(ml::moment_1d(rec, m) - s[m]), 1e-9 * scale) << trial << " m=" << m;
    EXPECT_NEAR(rec.atoms()[0].x, xs[0], 1e-7 * (1 + std::abs(xs[0]))) << trial;
    EXPECT_NEAR(rec.atoms()[1].x, xs[1], 1e-7 * (1 + std::abs(xs[1]))) << trial;
    EXPECT_NEAR(rec.atoms()[0].w, w0, 1e-7 * (1 + w0)) << trial;
    EXPECT_NEAR(rec.atoms()[1].w, w1, 1e-7 * (1 + w1)) << trial;
  }
}

TEST(SolveHamburger, ReconstructionProperty) {
  // Random strictly positive data of every order reproduces exactly.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> pos(0.1, 5.0);
  int solved = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t M = static_cast<std::size_t>(trial % 4);
    std::vector<double> s{pos(rng)};
    for (std::size_t m = 1; m <= M; ++m) s.push_back(u(rng));
    if (M >= 2) s[2] = s[1] * s[1] / s[0] + pos(rng);
    const HamburgerData data(s);
    ASSERT_EQ(ml::hamburger_check(data).kind, HamburgerKind::SolvableStrict);
    const auto sig = ml::solve_hamburger(data);
    EXPECT_LE(sig.size(), 2u);
    for (const auto& a : sig.atoms()) EXPECT_GT(a.w, 0.0);
    for (std::size_t m = 0; m <= M; ++m) {
      // Rounding scale of the sum: sum of |w x^m| over the atoms.
      double terms = 0.0;
      for (const auto& a : sig.atoms()) terms += a.w * std::pow(std::abs(a.x), double(m));
      EXPECT_NEAR(ml::moment_1d(sig, m), s[m], 1e-10 * (1 + std::max(std::abs(s[m]), terms)));
    }
    ++solved;
  }
  EXPECT_EQ(solved, 1000);
}

TEST(HamburgerCheck, VerdictIsScaleCovariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> loglam(-8.0, 8.0);
  const std::vector<std::vector<double>> fixed = {
      {1, 1, 1}, {1, 1, 1, 1}, {3, 0, 0}, {1, 3, 9, 27}, {0, 0, 0}, {0, 1}, {2, 1, 0.1}};
  for (const auto& base : fixed)
    for (int k = 0; k < 50; ++k) {
      const double lam = std::pow(10.0, loglam(rng));
      std::vector<double> scaled = base;
      for (double& v : scaled) v *= lam;
      EXPECT_EQ(ml::hamburger_check(HamburgerData(base)).kind,
                ml::hamburger_check(HamburgerData(scaled)).kind);
    }
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(static_cast<std::size_t>(trial % 4) + 1);
    for (double& v : s) v = u(rng);
    const double lam = std::pow(10.0, loglam(rng));
    std::vector<double> scaled = s;
    for (double& v : scaled) v *= lam;
    EXPECT_EQ(ml::hamburger_check(HamburgerData(s)).kind,
              ml::hamburger_check(HamburgerData(scaled)).kind);
  }
}
