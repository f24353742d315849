#pragma once

#include <complex>
#include <vector>

#include "mnlmix/config.hpp"
#include "mnlmix/polynomial.hpp"

namespace mnlmix {

struct RootSet {
  std::vector<std::complex<double>> roots;
  std::vector<bool> real;  // |imag| <= tau_imag

  int size() const { return static_cast<int>(roots.size()); }
  // Real parts of the roots flagged real, ascending.
  std::vector<double> real_roots() const;
  // Real roots inside the half-open interval (lo, hi].
  int count_real_in(double lo, double hi) const;
};

// |p(r)| / (||p||_inf * max(1, |r|)^deg p).
double scaled_residual(const Polynomial<double>& p, std::complex<double> r);

// Closed forms followed by at most 5 Newton steps per root (a step is kept
// only if it lowers |p|). Degree must be exact; ShapeError otherwise.
RootSet solve_quadratic(const Polynomial<double>& p, const Tolerances& tol = {});
RootSet solve_cubic(const Polynomial<double>& p, const Tolerances& tol = {});
RootSet solve_quartic(const Polynomial<double>& p, const Tolerances& tol = {});

// Trims leading coefficients below tol.lead * ||p|| and dispatches on the
// remaining degree (1 to 4). A nonzero constant has no roots.
RootSet solve_polynomial(const Polynomial<double>& p, const Tolerances& tol = {});

template <class T>
T cubic_discriminant(const Polynomial<T>& p) {
  if (p.degree() != 3) throw ShapeError("cubic_discriminant needs degree 3");
  const T& a = p.coeffs()[3];
  const T& b = p.coeffs()[2];
  const T& c = p.coeffs()[1];
  const T& d = p.coeffs()[0];
  return T(18) * a * b * c * d - T(4) * b * b * b * d + b * b * c * c - T(4) * a * c * c * c -
         T(27) * a * a * d * d;
}

// Synthetic division by (x - r). Throws NotARootError when
// |p(r)| > tau_defl * ||p||_inf (exact zero is required when tau_defl == 0).
template <class T>
Polynomial<T> deflate_root(const Polynomial<T>& p, const T& r, double tau_defl = 1e-6) {
  if (p.degree() < 1) throw ShapeError("cannot deflate a constant");
  const double res = std::abs(to_double(p(r)));
  if constexpr (NumericTraits<T>::exact) {
    if (tau_defl == 0 ? p(r) != T(0) : res > tau_defl * p.sup_norm())
      throw NotARootError("deflation point is not a root");
  } else {
    if (res > tau_defl * p.sup_norm()) throw NotARootError("deflation point is not a root");
  }
  const auto& c = p.coeffs();
  const int d = p.degree();
  std::vector<T> q(d);
  q[d - 1] = c[d];
  for (int k = d - 1; k >= 1; --k) q[k - 1] = c[k] + r * q[k];
  return Polynomial<T>(std::move(q));
}

// Determinant of the (deg p + deg q) Sylvester matrix, rows of p first.
// Pivoted elimination (partial pivoting in double, first nonzero pivot in rationals).
template <class T>
T sylvester_resultant(const Polynomial<T>& p, const Polynomial<T>& q) {
  if (p.is_zero() || q.is_zero()) throw ShapeError("resultant of zero polynomial");
  const int m = p.degree();
  const int n = q.degree();
  if (m < 1 || n < 1) throw ShapeError("resultant needs degrees >= 1");
  const int size = m + n;
  std::vector<std::vector<T>> s(size, std::vector<T>(size, T(0)));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) s[r][r + k] = p.coeffs()[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) s[n + r][r + k] = q.coeffs()[n - k];

  T det(1);
  for (int col = 0; col < size; ++col) {
    int piv = -1;
    if constexpr (NumericTraits<T>::exact) {
      for (int r = col; r < size; ++r)
        if (s[r][col] != T(0)) {
          piv = r;
          break;
        }
    } else {
      double best = 0;
      for (int r = col; r < size; ++r)
        if (std::abs(s[r][col]) > best) {
          best = std::abs(s[r][col]);
          piv = r;
        }
    }
    if (piv < 0) return T(0);
    if (piv != col) {
      std::swap(s[piv], s[col]);
      det = -det;
    }
    det *= s[col][col];
    for (int r = col + 1; r < size; ++r) {
      if (s[r][col] == T(0)) continue;
      const T f = s[r][col] / s[col][col];
      for (int k = col; k < size; ++k) s[r][k] -= f * s[col][k];
    }
  }
  return det;
}

// Number of distinct real roots in (lo, hi], from a Sturm chain evaluated in
// exact rationals. Endpoints that are roots are nudged upward (keeping the
// half-open convention); DegenerateInputError after 8 failed nudges.
int count_real_roots_sturm(const Polynomial<double>& p, double lo, double hi);
int count_real_roots_sturm(const Polynomial<Rational>& p, const Rational& lo, const Rational& hi);

// Rational roots of p near the real roots of its double image, confirmed by
// exact substitution.
std::vector<Rational> rational_roots(const Polynomial<Rational>& p, long long max_den = 1000000);

Polynomial<double> to_double(const Polynomial<Rational>& p);
Polynomial<Rational> to_rational(const Polynomial<double>& p);

}  // namespace mnlmix
