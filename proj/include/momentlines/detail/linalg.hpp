#pragma once

// Small dense linear algebra used by the Vandermonde split. Matrices are
// row-major std::vector<Real> of size n*n; sizes here never exceed a few
// dozen, so nothing fancier than Gaussian elimination is warranted.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "momentlines/error.hpp"

namespace momentlines::detail {

/// x^k by repeated multiplication.
template <class Real>
constexpr Real ipow(Real x, std::size_t k) {
  Real r = Real(1);
  for (std::size_t i = 0; i < k; ++i) r *= x;
  return r;
}

/// In-place LU factorization with partial pivoting. Returns the permutation
/// sign, or 0 if a pivot is exactly zero (singular matrix).
template <class Real>
int lu_factor(std::vector<Real>& a, std::vector<std::size_t>& perm, std::size_t n) {
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    Real best = std::abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real v = std::abs(a[i * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == Real(0)) return 0;
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[p * n + c]);
      std::swap(perm[k], perm[p]);
      sign = -sign;
    }
    const Real pivot = a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real f = a[i * n + k] / pivot;
      a[i * n + k] = f;
      for (std::size_t c = k + 1; c < n; ++c) a[i * n + c] -= f * a[k * n + c];
    }
  }
  return sign;
}

template <class Real>
Real lu_determinant(const std::vector<Real>& lu, int sign, std::size_t n) {
  Real det = static_cast<Real>(sign);
  for (std::size_t i = 0; i < n; ++i) det *= lu[i * n + i];
  return det;
}

template <class Real>
std::vector<Real> lu_solve(const std::vector<Real>& lu, const std::vector<std::size_t>& perm,
                           const std::vector<Real>& b, std::size_t n) {
  std::vector<Real> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real acc = b[perm[i]];
    for (std::size_t c = 0; c < i; ++c) acc -= lu[i * n + c] * x[c];
    x[i] = acc;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    Real acc = x[ii];
    for (std::size_t c = ii + 1; c < n; ++c) acc -= lu[ii * n + c] * x[c];
    x[ii] = acc / lu[ii * n + ii];
  }
  return x;
}

/// Determinant via LU; 0 for singular input.
template <class Real>
Real determinant(std::vector<Real> a, std::size_t n) {
  std::vector<std::size_t> perm;
  const int sign = lu_factor(a, perm, n);
  if (sign == 0) return Real(0);
  return lu_determinant(a, sign, n);
}

}  // namespace momentlines::detail
