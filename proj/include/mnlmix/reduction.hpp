#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mnlmix/choice_model.hpp"
#include "mnlmix/config.hpp"
#include "mnlmix/polyalg.hpp"

namespace mnlmix {

// Oracle values feeding the (a_i, a_j, b_i, b_j) system of a universe U:
//   full_i   = C_U(i)            full_j   = C_U(j)
//   drop_j_i = C_{U\{j}}(i)      drop_i_j = C_{U\{i}}(j)
//   pair_i   = C_{{i,j}}(i)      (optional)
template <class T>
struct PairSystemInput {
  T lambda{1};
  T full_i{0};
  T full_j{0};
  T drop_j_i{0};
  T drop_i_j{0};
  std::optional<T> pair_i;
};

template <class T>
PairSystemInput<T> pair_system_input(const BasicOracleTable<T>& oracle, const Slate& universe, int i, int j,
                                     bool with_pair) {
  PairSystemInput<T> s;
  s.lambda = oracle.lambda();
  s.full_i = oracle.value(universe, i);
  s.full_j = oracle.value(universe, j);
  s.drop_j_i = oracle.value(slate_without(universe, j), i);
  s.drop_i_j = oracle.value(slate_without(universe, i), j);
  if (with_pair) s.pair_i = oracle.value(make_slate({i, j}, oracle.n(), 2), i);
  return s;
}

// Same, straight from a model (no table).
template <class T>
PairSystemInput<T> pair_system_input(const BasicMixtureModel<T>& model, const Slate& universe, int i, int j,
                                     bool with_pair) {
  std::vector<Slate> slates = {universe, slate_without(universe, j), slate_without(universe, i)};
  if (with_pair) slates.push_back(make_slate({i, j}, model.n(), 2));
  return pair_system_input(oracle_table(model, slates), universe, i, j, with_pair);
}

// b_j as a rational function of x = b_i: numerator quadratic, denominator linear.
template <class T>
struct PartnerMap {
  Polynomial<T> numerator;
  Polynomial<T> denominator;

  // nullopt when |denominator| <= tau_den (the degenerate branch).
  std::optional<T> operator()(const T& x, double tau_den) const {
    const T d = denominator(x);
    if (std::abs(to_double(d)) <= tau_den) return std::nullopt;
    return numerator(x) / d;
  }
};

// N(x) = (drop_i_j (1 - full_i + lambda x) - full_j)(1 - x),  D(x) = lambda((1+lambda)x - full_i).
template <class T>
PartnerMap<T> partner_map(const T& lambda, const T& full_i, const T& full_j, const T& drop_i_j) {
  PartnerMap<T> m;
  m.numerator = Polynomial<T>{T(drop_i_j * (T(1) - full_i) - full_j), T(drop_i_j * lambda)} *
                Polynomial<T>{T(1), T(-1)};
  m.denominator = Polynomial<T>{T(-lambda * full_i), T(lambda * (T(1) + lambda))};
  return m;
}

template <class T>
PartnerMap<T> partner_map(const PairSystemInput<T>& s) {
  return partner_map(s.lambda, s.full_i, s.full_j, s.drop_i_j);
}

template <class T>
struct PairTuple {
  T a_i, a_j, b_i, b_j;
};

// The maps b_i -> (a_i, a_j, b_j) of one pair system.
template <class T>
struct BackSubstitution {
  T lambda{1};
  T full_i{0};
  T full_j{0};
  PartnerMap<T> partner;

  static BackSubstitution from(const PairSystemInput<T>& s) {
    return BackSubstitution{s.lambda, s.full_i, s.full_j, partner_map(s)};
  }
  std::optional<PairTuple<T>> evaluate(const T& b_i, double tau_den) const {
    const std::optional<T> b_j = partner(b_i, tau_den);
    if (!b_j) return std::nullopt;
    return PairTuple<T>{T(full_i - lambda * b_i), T(full_j - lambda * *b_j), b_i, *b_j};
  }
};

template <class T>
struct ThreeItemTail {
  T a1, a2, a3, b3;
};

// Completes a 3-item tuple from (b1, b2) and the row C_{123}.
template <class T>
ThreeItemTail<T> back_substitute(const T& b1, const T& b2, const std::vector<T>& c123, const T& lambda) {
  ThreeItemTail<T> t;
  t.a1 = c123[0] - lambda * b1;
  t.a2 = c123[1] - lambda * b2;
  t.b3 = T(1) - b1 - b2;
  t.a3 = T(1) - c123[0] - c123[1] + lambda * (b1 + b2);
  return t;
}

template <class T>
std::optional<T> b2_of_b1(const T& b1, const T& c23_2, const T& c123_1, const T& c123_2, const T& lambda,
                          double tau_den) {
  return partner_map(lambda, c123_1, c123_2, c23_2)(b1, tau_den);
}

// The pair-system equation left after substitution, with denominators cleared:
//   X = D (1 - a_j),  Y = D (1 - b_j)
//   P(x) = drop_j_i X Y - a_i D Y - lambda x D X
template <class T>
T cleared_P(const PairSystemInput<T>& s, const T& x) {
  const PartnerMap<T> m = partner_map(s);
  const T N = m.numerator(x);
  const T D = m.denominator(x);
  const T X = (T(1) - s.full_j) * D + s.lambda * N;
  const T Y = D - N;
  const T a_i = s.full_i - s.lambda * x;
  return s.drop_j_i * X * Y - a_i * D * Y - s.lambda * x * D * X;
}

// The 2-slate equation with denominators cleared:
//   U = D (a_i + a_j),  V = D (b_i + b_j)
//   P~(x) = pair_i U V - a_i D V - lambda x D U
template <class T>
T cleared_P_tilde(const PairSystemInput<T>& s, const T& x) {
  if (!s.pair_i) throw InputError("pair-slate value required");
  const PartnerMap<T> m = partner_map(s);
  const T N = m.numerator(x);
  const T D = m.denominator(x);
  const T U = (s.full_i + s.full_j - s.lambda * x) * D - s.lambda * N;
  const T V = x * D + N;
  const T a_i = s.full_i - s.lambda * x;
  return *s.pair_i * U * V - a_i * D * V - s.lambda * x * D * U;
}

template <class T>
std::vector<T> interpolation_nodes() {
  return {T(0), T(1) / T(4), T(1) / T(2), T(3) / T(4), T(1)};
}

// Quartic in b_i through five evaluations of the cleared expression.
template <class T>
Polynomial<T> build_quartic_P(const PairSystemInput<T>& s) {
  const std::vector<T> xs = interpolation_nodes<T>();
  std::vector<T> ys;
  for (const T& x : xs) ys.push_back(cleared_P(s, x));
  return interpolate(xs, ys);
}

template <class T>
Polynomial<T> build_quartic_P_tilde(const PairSystemInput<T>& s) {
  const std::vector<T> xs = interpolation_nodes<T>();
  std::vector<T> ys;
  for (const T& x : xs) ys.push_back(cleared_P_tilde(s, x));
  return interpolate(xs, ys);
}

// Direct polynomial algebra, used to cross-check the interpolated form.
template <class T>
Polynomial<T> expand_quartic_P(const PairSystemInput<T>& s) {
  const PartnerMap<T> m = partner_map(s);
  const Polynomial<T> X = m.denominator * T(T(1) - s.full_j) + m.numerator * s.lambda;
  const Polynomial<T> Y = m.denominator - m.numerator;
  const Polynomial<T> a_i{s.full_i, T(-s.lambda)};
  const Polynomial<T> lx{T(0), s.lambda};
  return X * Y * s.drop_j_i - a_i * m.denominator * Y - lx * m.denominator * X;
}

template <class T>
Polynomial<T> expand_quartic_P_tilde(const PairSystemInput<T>& s) {
  if (!s.pair_i) throw InputError("pair-slate value required");
  const PartnerMap<T> m = partner_map(s);
  const Polynomial<T> U =
      Polynomial<T>{T(s.full_i + s.full_j), T(-s.lambda)} * m.denominator - m.numerator * s.lambda;
  const Polynomial<T> V = Polynomial<T>{T(0), T(1)} * m.denominator + m.numerator;
  const Polynomial<T> a_i{s.full_i, T(-s.lambda)};
  const Polynomial<T> lx{T(0), s.lambda};
  return U * V * *s.pair_i - a_i * m.denominator * V - lx * m.denominator * U;
}

// Largest coefficient magnitude among the three terms of P. A quartic whose
// own sup-norm is tiny against this scale is identically zero up to rounding.
template <class T>
double quartic_term_scale(const PairSystemInput<T>& s) {
  const PartnerMap<T> m = partner_map(s);
  const Polynomial<T> X = m.denominator * T(T(1) - s.full_j) + m.numerator * s.lambda;
  const Polynomial<T> Y = m.denominator - m.numerator;
  const Polynomial<T> a_i{s.full_i, T(-s.lambda)};
  const Polynomial<T> lx{T(0), s.lambda};
  return std::max({(X * Y * s.drop_j_i).sup_norm(), (a_i * m.denominator * Y).sup_norm(),
                   (lx * m.denominator * X).sup_norm()});
}

// P deflated at the generating root.
template <class T>
Polynomial<T> deflated_cubic(const PairSystemInput<T>& s, const T& root, double tau_defl = 1e-6) {
  return deflate_root(build_quartic_P(s), root, tau_defl);
}

template <class T>
Polynomial<T> deflated_cubic_tilde(const PairSystemInput<T>& s, const T& root, double tau_defl = 1e-6) {
  return deflate_root(build_quartic_P_tilde(s), root, tau_defl);
}

// Resultant of the two cubics after scaling each to unit sup-norm. Leading
// coefficients under tau_lead are trimmed first; a constant operand c gives
// c^(deg other) as usual.
double resultant_gate_W(const Polynomial<double>& q1, const Polynomial<double>& q2, double tau_lead = 1e-13);

// Q_{1j} of the universe [n] from a model, deflated at the true b_1.
Polynomial<double> gate_cubic(const MixtureModel& model, int j);
Polynomial<double> gate_cubic_tilde(const MixtureModel& model, int j);

// Sum over (j, k) in S of W(Q_1j, Q_1k)^2. Pairs are 0-based item indices in 1..n-1.
double r_n_value(const MixtureModel& model, const std::vector<std::pair<int, int>>& pairs);

}  // namespace mnlmix
