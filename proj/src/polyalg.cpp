#include "mnlmix/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mnlmix {
namespace {

using cd = std::complex<double>;

// Roots of a monic real polynomial are kept as real values plus one
// representative (imag > 0) per conjugate pair.
struct RawRoots {
  std::vector<double> real;
  std::vector<cd> upper;
};

void add_quadratic(double b, double c, RawRoots& out) {
  // x^2 + b x + c
  const double disc = b * b - 4 * c;
  if (disc >= 0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0) {
      out.real.push_back(0);
      out.real.push_back(0);
      return;
    }
    out.real.push_back(q);
    out.real.push_back(c / q);
  } else {
    out.upper.emplace_back(-0.5 * b, 0.5 * std::sqrt(-disc));
  }
}

// Complex-coefficient quadratic x^2 + b x + c.
void add_complex_quadratic(cd b, cd c, std::vector<cd>& out) {
  const cd s = std::sqrt(b * b - 4.0 * c);
  cd q = -0.5 * (b + (std::real(std::conj(b) * s) >= 0 ? s : -s));
  if (q == cd(0)) {
    out.push_back(0);
    out.push_back(0);
    return;
  }
  out.push_back(q);
  out.push_back(c / q);
}

void add_cubic(double B, double C, double D, RawRoots& out) {
  // x^3 + B x^2 + C x + D, depressed by x = t - B/3.
  const double shift = B / 3;
  const double p = C - B * B / 3;
  const double q = 2 * B * B * B / 27 - B * C / 3 + D;
  const double h = q * q / 4 + p * p * p / 27;
  if (h > 0) {
    const double u = std::cbrt(-q / 2 - std::copysign(std::sqrt(h), q));
    const double v = u != 0 ? -p / (3 * u) : 0.0;
    out.real.push_back(u + v - shift);
    out.upper.emplace_back(-(u + v) / 2 - shift, std::abs(std::sqrt(3.0) / 2 * (u - v)));
  } else if (p == 0) {
    out.real.insert(out.real.end(), 3, -shift);
  } else {
    const double r = 2 * std::sqrt(-p / 3);
    const double arg = std::clamp(3 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3;
    for (int k = 0; k < 3; ++k) out.real.push_back(r * std::cos(phi - 2 * std::numbers::pi * k / 3) - shift);
  }
}

double largest_real(double B, double C, double D) {
  RawRoots r;
  add_cubic(B, C, D, r);
  return *std::max_element(r.real.begin(), r.real.end());
}

void add_quartic(double B, double C, double D, double E, RawRoots& out) {
  // x^4 + B x^3 + C x^2 + D x + E, depressed by x = y - B/4.
  const double shift = B / 4;
  const double B2 = B * B;
  const double p = C - 3 * B2 / 8;
  const double q = D - B * C / 2 + B2 * B / 8;
  const double r = E - B * D / 4 + B2 * C / 16 - 3 * B2 * B2 / 256;
  std::vector<cd> ys;
  const double scale = std::max({1.0, std::abs(p), std::abs(q), std::abs(r)});
  double m = 0;
  if (std::abs(q) > 1e-14 * scale) {
    // Resolvent m^3 + p m^2 + (p^2/4 - r) m - q^2/8 has a positive root.
    m = largest_real(p, p * p / 4 - r, -q * q / 8);
  }
  if (m <= 1e-14 * scale) {
    // Biquadratic: y^4 + p y^2 + r.
    std::vector<cd> zs;
    add_complex_quadratic(p, r, zs);
    for (const cd& z : zs) {
      const cd w = std::sqrt(z);
      ys.push_back(w);
      ys.push_back(-w);
    }
  } else {
    const double s = std::sqrt(2 * m);
    const double t = q / (2 * s);
    add_complex_quadratic(s, p / 2 + m - t, ys);
    add_complex_quadratic(-s, p / 2 + m + t, ys);
  }
  // Pair conjugates; anything close to the axis is taken as real for now and
  // classified after polishing.
  std::vector<cd> rest;
  for (const cd& y : ys) {
    const cd x = y - shift;
    if (std::abs(x.imag()) <= 1e-12 * std::max(1.0, std::abs(x))) {
      out.real.push_back(x.real());
    } else {
      rest.push_back(x);
    }
  }
  std::sort(rest.begin(), rest.end(), [](const cd& u, const cd& v) { return u.imag() > v.imag(); });
  // Upper half-plane representatives; rest has even size with conjugates.
  const std::size_t half = rest.size() / 2;
  for (std::size_t k = 0; k < half; ++k) {
    // Average with the partner for a symmetric pair.
    const cd& u = rest[k];
    std::size_t best = half;
    double gap = INFINITY;
    for (std::size_t l = half; l < rest.size(); ++l) {
      const double g = std::abs(std::conj(rest[l]) - u);
      if (g < gap) {
        gap = g;
        best = l;
      }
    }
    const cd v = std::conj(rest[best]);
    out.upper.push_back(0.5 * (u + v));
  }
  if (rest.size() % 2 == 1) out.real.push_back(rest.back().real());
}

double newton_real(const Polynomial<double>& p, const Polynomial<double>& dp, double x) {
  double fx = std::abs(p(x));
  for (int it = 0; it < 5 && fx > 0; ++it) {
    const double d = dp(x);
    if (d == 0) break;
    const double y = x - p(x) / d;
    const double fy = std::abs(p(y));
    if (!(fy < fx)) break;
    x = y;
    fx = fy;
  }
  return x;
}

cd newton_complex(const Polynomial<double>& p, const Polynomial<double>& dp, cd z) {
  double fz = std::abs(evaluate_complex(p, z));
  for (int it = 0; it < 5 && fz > 0; ++it) {
    const cd d = evaluate_complex(dp, z);
    if (d == cd(0)) break;
    const cd w = z - evaluate_complex(p, z) / d;
    const double fw = std::abs(evaluate_complex(p, w));
    if (!(fw < fz)) break;
    z = w;
    fz = fw;
  }
  return z;
}

RootSet finish(const Polynomial<double>& p, const RawRoots& raw, const Tolerances& tol) {
  const Polynomial<double> dp = p.derivative();
  RootSet rs;
  for (double x : raw.real) {
    rs.roots.emplace_back(newton_real(p, dp, x), 0.0);
    rs.real.push_back(true);
  }
  for (const cd& z0 : raw.upper) {
    cd z = newton_complex(p, dp, z0);
    const bool is_real = std::abs(z.imag()) <= tol.imag;
    rs.roots.push_back(z);
    rs.roots.push_back(std::conj(z));
    rs.real.push_back(is_real);
    rs.real.push_back(is_real);
  }
  return rs;
}

void require_degree(const Polynomial<double>& p, int d, const char* what) {
  if (p.degree() != d) throw ShapeError(std::string(what) + ": wrong degree");
}

}  // namespace

std::vector<double> RootSet::real_roots() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < roots.size(); ++k)
    if (real[k]) out.push_back(roots[k].real());
  std::sort(out.begin(), out.end());
  return out;
}

int RootSet::count_real_in(double lo, double hi) const {
  int c = 0;
  for (double x : real_roots())
    if (x > lo && x <= hi) ++c;
  return c;
}

double scaled_residual(const Polynomial<double>& p, std::complex<double> r) {
  const double norm = p.sup_norm();
  if (norm == 0) return 0;
  const double m = std::max(1.0, std::abs(r));
  return std::abs(evaluate_complex(p, r)) / (norm * std::pow(m, p.degree()));
}

RootSet solve_quadratic(const Polynomial<double>& p, const Tolerances& tol) {
  require_degree(p, 2, "solve_quadratic");
  const double a = p.leading();
  RawRoots raw;
  add_quadratic(p.coeff(1) / a, p.coeff(0) / a, raw);
  return finish(p, raw, tol);
}

RootSet solve_cubic(const Polynomial<double>& p, const Tolerances& tol) {
  require_degree(p, 3, "solve_cubic");
  const double a = p.leading();
  RawRoots raw;
  add_cubic(p.coeff(2) / a, p.coeff(1) / a, p.coeff(0) / a, raw);
  return finish(p, raw, tol);
}

RootSet solve_quartic(const Polynomial<double>& p, const Tolerances& tol) {
  require_degree(p, 4, "solve_quartic");
  const double a = p.leading();
  RawRoots raw;
  add_quartic(p.coeff(3) / a, p.coeff(2) / a, p.coeff(1) / a, p.coeff(0) / a, raw);
  return finish(p, raw, tol);
}

RootSet solve_polynomial(const Polynomial<double>& p, const Tolerances& tol) {
  const Polynomial<double> t = p.trimmed(tol.lead);
  switch (t.degree()) {
    case -1:
      throw ShapeError("zero polynomial has no finite root set");
    case 0:
      return {};
    case 1: {
      RootSet rs;
      rs.roots.emplace_back(-t.coeff(0) / t.coeff(1), 0.0);
      rs.real.push_back(true);
      return rs;
    }
    case 2:
      return solve_quadratic(t, tol);
    case 3:
      return solve_cubic(t, tol);
    case 4:
      return solve_quartic(t, tol);
    default:
      throw ShapeError("solve_polynomial handles degree <= 4");
  }
}

Polynomial<double> to_double(const Polynomial<Rational>& p) {
  std::vector<double> c;
  for (const Rational& v : p.coeffs()) c.push_back(to_double(v));
  return Polynomial<double>(std::move(c));
}

Polynomial<Rational> to_rational(const Polynomial<double>& p) {
  std::vector<Rational> c;
  for (double v : p.coeffs()) c.emplace_back(v);
  return Polynomial<Rational>(std::move(c));
}

namespace {

int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int sign_changes(const std::vector<Polynomial<Rational>>& chain, const Rational& x) {
  int changes = 0;
  int prev = 0;
  for (const auto& q : chain) {
    const int s = sign_of(q(x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

Rational nudge_off_root(const Polynomial<Rational>& p, Rational x) {
  Rational step = (abs_value(x) + 1) / Rational(1000000000000LL);
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (p(x) != 0) return x;
    x += step;
    step *= 2;
  }
  if (p(x) != 0) return x;
  throw DegenerateInputError("interval endpoint is a root");
}

}  // namespace

int count_real_roots_sturm(const Polynomial<Rational>& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw ShapeError("Sturm count of zero polynomial");
  if (p.degree() == 0) return 0;
  const Rational l = nudge_off_root(p, lo);
  const Rational h = nudge_off_root(p, hi);
  std::vector<Polynomial<Rational>> chain{p, p.derivative()};
  while (chain.back().degree() > 0) {
    Polynomial<Rational> r = poly_remainder(chain[chain.size() - 2], chain.back());
    if (r.is_zero()) break;
    chain.push_back(r * Rational(-1));
  }
  return sign_changes(chain, l) - sign_changes(chain, h);
}

int count_real_roots_sturm(const Polynomial<double>& p, double lo, double hi) {
  return count_real_roots_sturm(to_rational(p), Rational(lo), Rational(hi));
}

std::vector<Rational> rational_roots(const Polynomial<Rational>& p, long long max_den) {
  std::vector<Rational> out;
  if (p.degree() < 1) return out;
  Tolerances tol;
  tol.imag = 1e-6;
  const RootSet rs = solve_polynomial(to_double(p), tol);
  for (double x : rs.real_roots()) {
    const Rational r = rational_approximation(x, max_den);
    if (p(r) == 0 && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mnlmix
