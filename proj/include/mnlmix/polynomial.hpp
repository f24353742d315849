#pragma once

#include <algorithm>
#include <complex>
#include <initializer_list>
#include <vector>

#include "mnlmix/errors.hpp"
#include "mnlmix/numeric.hpp"

namespace mnlmix {

// Dense univariate polynomial, coefficients in ascending degree.
// Exact trailing zeros are always stripped; the zero polynomial has degree -1.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { strip(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { strip(); }

  static Polynomial constant(T v) { return Polynomial(std::vector<T>{std::move(v)}); }
  // x - r
  static Polynomial linear_factor(const T& r) { return Polynomial(std::vector<T>{T(-r), T(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : T(0); }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  T operator()(const T& x) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    std::vector<T> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * T(static_cast<long>(k)));
    return Polynomial(std::move(d));
  }

  double sup_norm() const {
    double m = 0;
    for (const T& v : c_) m = std::max(m, std::abs(to_double(v)));
    return m;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    strip();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    strip();
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    for (T& v : c_) v *= s;
    strip();
    return *this;
  }

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(Polynomial p, const T& s) { return p *= s; }
  friend Polynomial operator*(const T& s, Polynomial p) { return p *= s; }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return Polynomial();
    std::vector<T> r(p.c_.size() + q.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial& p, const Polynomial& q) { return p.c_ == q.c_; }

  // Drops leading coefficients with |c| <= rel * sup-norm.
  Polynomial trimmed(double rel) const {
    const double bound = rel * sup_norm();
    std::vector<T> c = c_;
    while (!c.empty() && std::abs(to_double(c.back())) <= bound) c.pop_back();
    return Polynomial(std::move(c));
  }

  // Divides every coefficient by the sup-norm (double) or leaves rationals as is.
  Polynomial unit_scaled() const {
    const double m = sup_norm();
    if (m == 0) return *this;
    Polynomial p = *this;
    for (T& v : p.c_) v /= T(m);
    return p;
  }

 private:
  void strip() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

template <class T>
std::complex<double> evaluate_complex(const Polynomial<T>& p, std::complex<double> z) {
  std::complex<double> acc(0);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + to_double(*it);
  return acc;
}

// Polynomial with the given (real) roots and leading coefficient.
template <class T>
Polynomial<T> from_roots(const std::vector<T>& roots, const T& leading = T(1)) {
  Polynomial<T> p = Polynomial<T>::constant(leading);
  for (const T& r : roots) p = p * Polynomial<T>::linear_factor(r);
  return p;
}

// Euclidean remainder; used by the Sturm chain.
template <class T>
Polynomial<T> poly_remainder(const Polynomial<T>& num, const Polynomial<T>& den) {
  if (den.is_zero()) throw ShapeError("division by zero polynomial");
  std::vector<T> r = num.coeffs();
  const int dd = den.degree();
  const T lead = den.leading();
  for (int k = static_cast<int>(r.size()) - 1; k >= dd; --k) {
    const T f = r[k] / lead;
    for (int m = 0; m <= dd; ++m) r[k - dd + m] -= f * den.coeffs()[m];
    r[k] = T(0);
  }
  r.resize(std::min<std::size_t>(r.size(), static_cast<std::size_t>(dd)));
  return Polynomial<T>(std::move(r));
}

// Lagrange data to monomial coefficients via Newton divided differences.
// Exact for rationals; the abscissae must be distinct.
template <class T>
Polynomial<T> interpolate(const std::vector<T>& xs, const std::vector<T>& ys) {
  const std::size_t m = xs.size();
  if (ys.size() != m || m == 0) throw ShapeError("interpolation needs matching nonempty data");
  std::vector<T> dd = ys;
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = m - 1; i >= level; --i) {
      const T gap = xs[i] - xs[i - level];
      if (gap == T(0)) throw DegenerateInputError("repeated interpolation abscissa");
      dd[i] = (dd[i] - dd[i - 1]) / gap;
      if (i == level) break;
    }
  }
  // Horner on the Newton form.
  Polynomial<T> p = Polynomial<T>::constant(dd[m - 1]);
  for (std::size_t i = m - 1; i-- > 0;) {
    p = p * Polynomial<T>::linear_factor(xs[i]) + Polynomial<T>::constant(dd[i]);
  }
  return p;
}

}  // namespace mnlmix
