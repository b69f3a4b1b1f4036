#pragma once

// Moment tables and finite atomic measures, plus exact moment integration.
// moments_table() and residual() double as the verification oracle for
// every solver in the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "momentlines/detail/linalg.hpp"
#include "momentlines/error.hpp"

namespace momentlines {

/// Rectangular moment data s[m][n], 0 <= m <= M, 0 <= n <= N.
class MomentTable {
 public:
  /// All-zero table of the given order.
  MomentTable(std::size_t M, std::size_t N) : M_(M), N_(N), s_((M + 1) * (N + 1), 0.0) {}

  /// Row-major values, row index m.
  MomentTable(std::size_t M, std::size_t N, std::vector<double> row_major)
      : M_(M), N_(N), s_(std::move(row_major)) {
    if (s_.size() != (M_ + 1) * (N_ + 1))
      throw Error(ErrorKind::InvalidInput, "moment table: expected " +
                                               std::to_string((M_ + 1) * (N_ + 1)) +
                                               " entries, got " + std::to_string(s_.size()));
    check_finite();
  }

  /// rows[m][n]; rows must be non-empty and rectangular.
  explicit MomentTable(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
      throw Error(ErrorKind::InvalidInput, "moment table: at least one row and column required");
    M_ = rows.size() - 1;
    N_ = rows.front().size() - 1;
    s_.reserve(rows.size() * rows.front().size());
    for (const auto& row : rows) {
      if (row.size() != N_ + 1)
        throw Error(ErrorKind::InvalidInput, "moment table: rows have unequal length");
      s_.insert(s_.end(), row.begin(), row.end());
    }
    check_finite();
  }

  std::size_t M() const noexcept { return M_; }
  std::size_t N() const noexcept { return N_; }

  double operator()(std::size_t m, std::size_t n) const noexcept { return s_[m * (N_ + 1) + n]; }

  double at(std::size_t m, std::size_t n) const {
    if (m > M_ || n > N_)
      throw Error(ErrorKind::InvalidInput, "moment table: index (" + std::to_string(m) + "," +
                                               std::to_string(n) + ") out of range");
    return (*this)(m, n);
  }

  std::span<const double> row_major() const noexcept { return s_; }

  double max_abs() const noexcept {
    double r = 0.0;
    for (double v : s_) r = std::max(r, std::abs(v));
    return r;
  }

  bool all_zero() const noexcept {
    return std::all_of(s_.begin(), s_.end(), [](double v) { return v == 0.0; });
  }

  MomentTable scaled(double lambda) const {
    std::vector<double> v = s_;
    for (double& x : v) x *= lambda;
    return MomentTable(M_, N_, std::move(v));
  }

  /// Copy with a single entry replaced; the table itself stays immutable.
  MomentTable with(std::size_t m, std::size_t n, double value) const {
    std::vector<double> v = s_;
    v.at(m * (N_ + 1) + n) = value;
    return MomentTable(M_, N_, std::move(v));
  }

  friend bool operator==(const MomentTable&, const MomentTable&) = default;

 private:
  void check_finite() const {
    for (std::size_t i = 0; i < s_.size(); ++i)
      if (!std::isfinite(s_[i]))
        throw Error(ErrorKind::InvalidInput,
                    "moment table: non-finite entry s[" + std::to_string(i / (N_ + 1)) + "][" +
                        std::to_string(i % (N_ + 1)) + "]");
  }

  std::size_t M_ = 0;
  std::size_t N_ = 0;
  std::vector<double> s_;
};

struct Atom1D {
  double x;
  double w;
  friend bool operator==(const Atom1D&, const Atom1D&) = default;
};

struct Atom2D {
  double x1;
  double x2;
  double w;
  friend bool operator==(const Atom2D&, const Atom2D&) = default;
};

namespace detail {

template <class Atom, class SameLocation>
std::vector<Atom> validate_and_merge(std::vector<Atom> in, SameLocation same) {
  std::vector<Atom> out;
  out.reserve(in.size());
  for (const Atom& a : in) {
    if (!std::isfinite(a.w)) throw Error(ErrorKind::InvalidInput, "atom weight is not finite");
    if (a.w <= 0.0) throw Error(ErrorKind::InvalidInput, "atom weight must be positive");
    auto it = std::find_if(out.begin(), out.end(), [&](const Atom& b) { return same(a, b); });
    if (it != out.end())
      it->w += a.w;
    else
      out.push_back(a);
  }
  return out;
}

}  // namespace detail

/// Finite nonnegative atomic measure on R. Empty means the zero measure.
class AtomicMeasure1D {
 public:
  AtomicMeasure1D() = default;
  explicit AtomicMeasure1D(std::vector<Atom1D> atoms)
      : atoms_(detail::validate_and_merge(
            std::move(atoms), [](const Atom1D& a, const Atom1D& b) { return a.x == b.x; })) {
    for (const Atom1D& a : atoms_)
      if (!std::isfinite(a.x)) throw Error(ErrorKind::InvalidInput, "atom location is not finite");
  }

  std::span<const Atom1D> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

 private:
  std::vector<Atom1D> atoms_;
};

/// Finite nonnegative atomic measure on R^2. Duplicate locations are merged.
class AtomicMeasure2D {
 public:
  AtomicMeasure2D() = default;
  explicit AtomicMeasure2D(std::vector<Atom2D> atoms)
      : atoms_(detail::validate_and_merge(std::move(atoms), [](const Atom2D& a, const Atom2D& b) {
          return a.x1 == b.x1 && a.x2 == b.x2;
        })) {
    for (const Atom2D& a : atoms_)
      if (!std::isfinite(a.x1) || !std::isfinite(a.x2))
        throw Error(ErrorKind::InvalidInput, "atom location is not finite");
  }

  std::span<const Atom2D> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

 private:
  std::vector<Atom2D> atoms_;
};

inline double moment_1d(const AtomicMeasure1D& sigma, std::size_t m) {
  double acc = 0.0;
  for (const Atom1D& a : sigma.atoms()) acc += a.w * detail::ipow(a.x, m);
  return acc;
}

inline double moment_2d(const AtomicMeasure2D& mu, std::size_t m, std::size_t n) {
  double acc = 0.0;
  for (const Atom2D& a : mu.atoms()) acc += a.w * detail::ipow(a.x1, m) * detail::ipow(a.x2, n);
  return acc;
}

inline double total_mass(const AtomicMeasure2D& mu) { return moment_2d(mu, 0, 0); }

inline MomentTable moments_table(const AtomicMeasure2D& mu, std::size_t M, std::size_t N) {
  std::vector<double> v;
  v.reserve((M + 1) * (N + 1));
  for (std::size_t m = 0; m <= M; ++m)
    for (std::size_t n = 0; n <= N; ++n) v.push_back(moment_2d(mu, m, n));
  return MomentTable(M, N, std::move(v));
}

/// Max-norm mismatch between the table and the measure's moments.
inline double residual(const MomentTable& table, const AtomicMeasure2D& mu) {
  double r = 0.0;
  for (std::size_t m = 0; m <= table.M(); ++m)
    for (std::size_t n = 0; n <= table.N(); ++n)
      r = std::max(r, std::abs(moment_2d(mu, m, n) - table(m, n)));
  return r;
}

/// The scale-free acceptance bound used throughout: tol * (1 + max|s|).
inline double residual_bound(const MomentTable& table, double tol) {
  return tol * (1.0 + table.max_abs());
}

}  // namespace momentlines
