#include "mnlmix/identify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "mnlmix/learn.hpp"
#include "mnlmix/rng.hpp"

namespace mnlmix {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
double tau_den_for(const T& lambda, const Tolerances& tol) {
  if constexpr (NumericTraits<T>::exact) {
    return 0;
  } else {
    return tol.den(lambda);
  }
}

template <class T>
bool in_range(const T& v, double adm) {
  const double x = to_double(v);
  return x >= -adm && x <= 1 + adm;
}

// Real abscissae worth back-substituting. Near-real roots are kept; the
// residual decides. In rational mode rational roots are exact.
template <class T>
std::vector<std::pair<T, bool>> real_candidates(const Polynomial<T>& p, const Tolerances& tol) {
  std::vector<std::pair<T, bool>> out;
  if (p.degree() < 1) return out;
  Polynomial<double> pd;
  if constexpr (NumericTraits<T>::exact) {
    pd = to_double(p);
  } else {
    pd = p;
  }
  if (pd.trimmed(tol.lead).degree() < 1) return out;
  const RootSet rs = solve_polynomial(pd, tol);
  std::vector<double> xs;
  for (const auto& r : rs.roots) {
    if (r.imag() < 0) continue;
    if (std::abs(r.imag()) <= std::max(tol.imag, 1e-6 * std::max(1.0, std::abs(r)))) xs.push_back(r.real());
  }
  std::sort(xs.begin(), xs.end());
  if constexpr (NumericTraits<T>::exact) {
    const std::vector<Rational> exact = rational_roots(p);
    for (const Rational& r : exact) out.emplace_back(r, true);
    for (double x : xs) {
      bool matched = false;
      for (const Rational& r : exact)
        if (std::abs(to_double(r) - x) < 1e-7) matched = true;
      if (!matched) out.emplace_back(Rational(x), false);
    }
  } else {
    for (double x : xs) out.emplace_back(x, false);
  }
  return out;
}

template <class T>
std::vector<CandidateSolution<T>> dedupe(std::vector<CandidateSolution<T>> c, double tol) {
  std::sort(c.begin(), c.end(), [](const auto& x, const auto& y) { return x.residual < y.residual; });
  std::vector<CandidateSolution<T>> out;
  for (auto& x : c) {
    bool dup = false;
    for (const auto& y : out)
      if (candidate_distance(x, y) <= tol) dup = true;
    if (!dup) out.push_back(std::move(x));
  }
  return out;
}

template <class T>
CandidateSolution<T> swapped(const CandidateSolution<T>& x) {
  CandidateSolution<T> y = x;
  std::swap(y.a, y.b);
  return y;
}

// Merges solutions that are (a,b) swaps of each other; used when lambda = 1.
template <class T>
std::vector<CandidateSolution<T>> merge_swaps(std::vector<CandidateSolution<T>> c, double tol, bool* merged) {
  std::vector<CandidateSolution<T>> out;
  for (auto& x : c) {
    bool dup = false;
    for (const auto& y : out)
      if (candidate_distance(swapped(x), y) <= tol) dup = true;
    if (dup) {
      *merged = true;
    } else {
      out.push_back(std::move(x));
    }
  }
  return out;
}

template <class T>
bool is_unit_lambda(const T& lambda) {
  return std::abs(to_double(lambda) - 1.0) <= 1e-12;
}

CandidateSolution<double> to_double_candidate(const CandidateSolution<Rational>& x) {
  CandidateSolution<double> y;
  y.items = x.items;
  for (const auto& v : x.a) y.a.push_back(to_double(v));
  for (const auto& v : x.b) y.b.push_back(to_double(v));
  y.residual = x.residual;
  y.admissible = x.admissible;
  y.degenerate = x.degenerate;
  y.exact_root = x.exact_root;
  return y;
}

template <class T>
bool quartic_vanishes(const PairSystemInput<T>& s) {
  const Polynomial<T> p = build_quartic_P(s);
  if constexpr (NumericTraits<T>::exact) {
    return p.is_zero();
  } else {
    return p.sup_norm() <= 1e-11 * quartic_term_scale(s);
  }
}

}  // namespace

template <class T>
double candidate_distance(const CandidateSolution<T>& x, const CandidateSolution<T>& y) {
  double d = 0;
  auto acc = [&d](const std::vector<T>& u, const std::vector<T>& v) {
    if (u.size() != v.size()) {
      d = kInf;
      return;
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double p = to_double(u[k]);
      const double q = to_double(v[k]);
      const double m = std::max({std::abs(p), std::abs(q), 1e-12});
      d = std::max(d, std::abs(p - q) / m);
    }
  };
  acc(x.a, y.a);
  acc(x.b, y.b);
  return d;
}

template <class T>
double pair_system_residual(const PairSystemInput<T>& s, const PairTuple<T>& t) {
  const T one(1);
  if (t.a_j == one || t.b_j == one || t.a_i == one || t.b_i == one) return kInf;
  double r = 0;
  auto upd = [&r](const T& v) { r = std::max(r, std::abs(to_double(v))); };
  upd(t.a_i + s.lambda * t.b_i - s.full_i);
  upd(t.a_j + s.lambda * t.b_j - s.full_j);
  upd(t.a_i / (one - t.a_j) + s.lambda * t.b_i / (one - t.b_j) - s.drop_j_i);
  upd(t.a_j / (one - t.a_i) + s.lambda * t.b_j / (one - t.b_i) - s.drop_i_j);
  if (s.pair_i) {
    const T sa = t.a_i + t.a_j;
    const T sb = t.b_i + t.b_j;
    if (sa == T(0) || sb == T(0)) return kInf;
    upd(t.a_i / sa + s.lambda * t.b_i / sb - *s.pair_i);
  }
  return std::isnan(r) ? kInf : r;
}

template <class T>
std::vector<CandidateSolution<T>> solve_pair_system(const PairSystemInput<T>& s, const Tolerances& tol) {
  std::vector<CandidateSolution<T>> out;
  const double tau_den = tau_den_for(s.lambda, tol);
  auto push = [&](const PairTuple<T>& t, bool degenerate, bool exact_root) {
    CandidateSolution<T> c;
    c.items = {0, 1};
    c.a = {t.a_i, t.a_j};
    c.b = {t.b_i, t.b_j};
    c.residual = pair_system_residual(s, t);
    c.admissible = in_range(t.a_i, tol.adm) && in_range(t.a_j, tol.adm) && in_range(t.b_i, tol.adm) &&
                   in_range(t.b_j, tol.adm);
    c.degenerate = degenerate;
    c.exact_root = exact_root;
    if (degenerate && !(c.admissible && c.residual <= tol.residual)) return;
    out.push_back(std::move(c));
  };

  const BackSubstitution<T> back = BackSubstitution<T>::from(s);
  if (!quartic_vanishes(s)) {
    for (const auto& [x, exact] : real_candidates(build_quartic_P(s), tol)) {
      if (!in_range(x, tol.adm)) continue;
      if (const auto t = back.evaluate(x, tau_den)) push(*t, false, exact);
    }
  }

  // Pinned denominator: b_i = full_i / (1 + lambda) forces a_i = b_i, and
  // b_j solves  c lam y^2 + (beta(lam^2 - 1) - c(lam - 1 + C_j)) y
  //             + beta(1 + lam(1 - C_j)) - c(1 - C_j) = 0.
  const T lam = s.lambda;
  const T beta = s.full_i / (T(1) + lam);
  const T c = s.drop_j_i;
  const T cj = s.full_j;
  const Polynomial<T> quad{T(beta * (T(1) + lam * (T(1) - cj)) - c * (T(1) - cj)),
                           T(beta * (lam * lam - T(1)) - c * (lam - T(1) + cj)), T(c * lam)};
  std::vector<std::pair<T, bool>> ys = real_candidates(quad, tol);
  ys.emplace_back(cj / (T(1) + lam), NumericTraits<T>::exact);
  for (const auto& [y, exact] : ys) push(PairTuple<T>{beta, T(cj - lam * y), beta, y}, true, exact);

  return dedupe(std::move(out), tol.dedupe);
}

template <class T>
double table_residual(const BasicOracleTable<T>& oracle, const std::vector<T>& a, const std::vector<T>& b) {
  double r = 0;
  for (const auto& [slate, row] : oracle.entries()) {
    T sa(0), sb(0);
    for (int i : slate) {
      if (i >= static_cast<int>(a.size())) return kInf;
      sa += a[i];
      sb += b[i];
    }
    if (sa == T(0) || sb == T(0)) return kInf;
    for (std::size_t k = 0; k < slate.size(); ++k) {
      const T v = a[slate[k]] / sa + oracle.lambda() * b[slate[k]] / sb - row[k];
      r = std::max(r, std::abs(to_double(v)));
    }
  }
  return std::isnan(r) ? kInf : r;
}

template <class T>
ThreeItemResult<T> solve_3item(const BasicOracleTable<T>& oracle, const Tolerances& tol) {
  const Slate u{0, 1, 2};
  for (const Slate& need : {Slate{0, 1}, Slate{0, 2}, Slate{1, 2}, u})
    if (!oracle.contains(need)) throw InputError("3-item oracle needs every slate of [3]");
  ThreeItemResult<T> result;
  const PairSystemInput<T> s = pair_system_input(oracle, u, 0, 1, false);
  if (quartic_vanishes(s)) {
    result.continuum = true;
    return result;
  }
  BasicOracleTable<T> sub(3, oracle.lambda());
  for (const Slate& t : sub_slates(u)) sub.set(t, oracle.row(t));
  const std::vector<T>& c123 = oracle.row(u);
  std::vector<CandidateSolution<T>> good;
  for (const auto& pc : solve_pair_system(s, tol)) {
    const ThreeItemTail<T> tail = back_substitute(pc.b[0], pc.b[1], c123, oracle.lambda());
    CandidateSolution<T> c;
    c.items = {0, 1, 2};
    c.a = {tail.a1, tail.a2, tail.a3};
    c.b = {pc.b[0], pc.b[1], tail.b3};
    c.residual = table_residual(sub, c.a, c.b);
    c.admissible = true;
    for (const auto* w : {&c.a, &c.b})
      for (const T& v : *w) c.admissible = c.admissible && in_range(v, tol.adm);
    c.degenerate = pc.degenerate;
    c.exact_root = pc.exact_root;
    if (c.admissible && c.residual <= tol.residual) {
      good.push_back(std::move(c));
    } else {
      result.rejected.push_back(std::move(c));
    }
  }
  result.solutions = dedupe(std::move(good), tol.dedupe);
  return result;
}

void polish_candidate(const OracleTable& oracle, CandidateSolution<double>& c, const Tolerances& tol) {
  if (!(c.residual > tol.residual && c.residual <= tol.polish)) return;
  auto positive = [](const std::vector<double>& w) {
    return std::all_of(w.begin(), w.end(), [](double v) { return v > 0; });
  };
  if (!positive(c.a) || !positive(c.b)) return;
  const std::vector<std::pair<Slate, std::vector<double>>> rows(oracle.entries().begin(), oracle.entries().end());
  refine_least_squares(rows, oracle.lambda(), c.a, c.b);
  c.residual = table_residual(oracle, c.a, c.b);
}

double IdentifiabilityReport::min_cross_gate() const {
  double m = kInf;
  for (const GateValue& g : gates)
    if (g.kind == GateKind::kCross) m = std::min(m, std::abs(g.value));
  return m;
}

double IdentifiabilityReport::min_pair_gate() const {
  double m = kInf;
  for (const GateValue& g : gates)
    if (g.kind == GateKind::kPairSlate) m = std::min(m, std::abs(g.value));
  return m;
}

int IdentifiabilityReport::exit_code() const {
  if (collapse) return 3;
  if (!unique || !pair_level_unique) return 2;
  return 0;
}

namespace {

std::vector<Slate> identify_slates(int n) {
  if (n <= 4) return all_slates(n);
  std::vector<Slate> s{full_slate(n)};
  for (int j = 0; j < n; ++j) s.push_back(slate_without(full_slate(n), j));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s.push_back({i, j});
  return s;
}

double gate_or_nan(const std::function<double()>& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

void add_gates(const MixtureModel& model, const std::vector<PairSystemInput<double>>& systems,
               IdentifiabilityReport& rep) {
  const int n = model.n();
  std::vector<std::optional<Polynomial<double>>> q(n);
  for (int j = 1; j < n; ++j) {
    try {
      q[j] = deflated_cubic(systems[j], model.b[0]);
    } catch (const Error&) {
      rep.codes.push_back("gate-unavailable");
    }
  }
  for (int j = 1; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      if (!q[j] || !q[k]) continue;
      rep.gates.push_back({GateKind::kCross, j, k, gate_or_nan([&] { return resultant_gate_W(*q[j], *q[k]); })});
    }
  if (n >= 4) {
    for (int j = 1; j < n; ++j) {
      if (!q[j] || !systems[j].pair_i) continue;
      const double w = gate_or_nan(
          [&] { return resultant_gate_W(*q[j], deflated_cubic_tilde(systems[j], model.b[0])); });
      rep.gates.push_back({GateKind::kPairSlate, j, 0, w});
    }
  }
}

}  // namespace

// Extends a b_1 candidate to every item through the (1, j) systems.
std::vector<CandidateSolution<double>> extend_from_b1(double x, const std::vector<PairSystemInput<double>>& systems,
                                                      const Tolerances& tol) {
  const int n = static_cast<int>(systems.size());
  std::vector<std::vector<std::pair<double, double>>> choices(n);  // (a_j, b_j)
  for (int j = 1; j < n; ++j) {
    const BackSubstitution<double> back = BackSubstitution<double>::from(systems[j]);
    if (const auto t = back.evaluate(x, tol.den(systems[j].lambda))) {
      choices[j].push_back({t->a_j, t->b_j});
    } else {
      for (const auto& c : solve_pair_system(systems[j], tol))
        if (c.degenerate && std::abs(c.b[0] - x) <= 1e-9) choices[j].push_back({c.a[1], c.b[1]});
    }
    if (choices[j].empty()) return {};
  }
  std::vector<CandidateSolution<double>> out;
  std::vector<std::size_t> idx(n, 0);
  for (int guard = 0; guard < 256; ++guard) {
    CandidateSolution<double> c;
    c.items = full_slate(n);
    c.a.assign(n, 0);
    c.b.assign(n, 0);
    c.b[0] = x;
    c.a[0] = systems[1].full_i - systems[1].lambda * x;
    for (int j = 1; j < n; ++j) {
      c.a[j] = choices[j][idx[j]].first;
      c.b[j] = choices[j][idx[j]].second;
    }
    out.push_back(std::move(c));
    int j = 1;
    while (j < n && ++idx[j] == choices[j].size()) idx[j++] = 0;
    if (j == n) break;
  }
  return out;
}

IdentifiabilityReport check_identifiability(const MixtureModel& model, const IdentifyOptions& opts) {
  validate_model(model);
  const Tolerances& tol = opts.tol;
  const int n = model.n();
  IdentifiabilityReport rep;
  double gap = 0;
  for (int i = 0; i < n; ++i) gap = std::max(gap, std::abs(model.a[i] - model.b[i]));
  if (gap < kCollapseTol) {
    rep.collapse = true;
    rep.unique = false;
    rep.pair_level_unique = false;
    rep.codes.push_back("collapse");
    return rep;
  }
  const bool unit = is_unit_lambda(model.lambda);
  rep.swap_note = unit;
  if (unit) rep.codes.push_back("swap-symmetry");

  const OracleTable oracle = oracle_table(model, identify_slates(n));
  const Slate u = full_slate(n);
  std::vector<PairSystemInput<double>> systems(n);
  for (int j = 1; j < n; ++j) systems[j] = pair_system_input(oracle, u, 0, j, n >= 4);

  std::vector<CandidateSolution<double>> full;
  if (n == 3) {
    const ThreeItemResult<double> r = solve_3item(oracle, tol);
    if (r.continuum) {
      rep.unique = false;
      rep.codes.push_back("continuum");
      return rep;
    }
    full = r.solutions;
    for (const auto& c : solve_pair_system(systems[1], tol))
      if (c.admissible && c.residual <= tol.residual) rep.pair_solutions.push_back(c);
  } else {
    for (int j = 1; j < n; ++j) {
      std::vector<CandidateSolution<double>> ok;
      for (auto c : solve_pair_system(systems[j], tol)) {
        if (!(c.admissible && c.residual <= tol.residual)) continue;
        c.items = {0, j};
        ok.push_back(std::move(c));
      }
      bool merged = false;
      if (unit) ok = merge_swaps(std::move(ok), tol.dedupe, &merged);
      if (ok.size() > 1) rep.pair_level_unique = false;
      for (auto& c : ok) rep.pair_solutions.push_back(std::move(c));
    }
    PairSystemInput<double> base = systems[1];
    base.pair_i.reset();
    for (const auto& pc : solve_pair_system(base, tol)) {
      if (!pc.admissible) continue;
      for (auto& c : extend_from_b1(pc.b[0], systems, tol)) {
        c.residual = table_residual(oracle, c.a, c.b);
        polish_candidate(oracle, c, tol);
        c.admissible = true;
        for (const auto* w : {&c.a, &c.b})
          for (double v : *w) c.admissible = c.admissible && in_range(v, tol.adm);
        c.degenerate = pc.degenerate;
        if (c.admissible && c.residual <= tol.residual) full.push_back(std::move(c));
      }
    }
    full = dedupe(std::move(full), tol.dedupe);
  }
  bool merged = false;
  if (unit) full = merge_swaps(std::move(full), tol.dedupe, &merged);
  rep.solutions = full;
  rep.unique = full.size() == 1;
  if (full.empty()) rep.codes.push_back("no-solution");
  rep.codes.push_back(rep.unique ? "unique" : "non-unique");
  if (!rep.pair_level_unique) rep.codes.push_back("pair-level-non-unique");
  add_gates(model, systems, rep);
  return rep;
}

IdentifiabilityReport check_identifiability(const RationalMixtureModel& model, const IdentifyOptions& opts) {
  validate_model(model);
  IdentifiabilityReport rep = check_identifiability(to_double(model), opts);
  if (rep.collapse) return rep;
  const int n = model.n();
  const Tolerances& tol = opts.tol;
  if (n == 3) {
    const RationalOracleTable oracle = oracle_table(model, all_slates(3));
    const ThreeItemResult<Rational> r = solve_3item(oracle, tol);
    rep.solutions.clear();
    for (const auto& c : r.solutions) rep.solutions.push_back(to_double_candidate(c));
    rep.codes.push_back("exact");
    return rep;
  }
  rep.pair_solutions.clear();
  const Slate u = full_slate(n);
  std::vector<Slate> slates{u};
  for (int j = 0; j < n; ++j) slates.push_back(slate_without(u, j));
  for (int j = 1; j < n; ++j) slates.push_back({0, j});
  const RationalOracleTable oracle = oracle_table(model, slates);
  for (int j = 1; j < n; ++j) {
    for (auto c : solve_pair_system(pair_system_input(oracle, u, 0, j, true), tol)) {
      if (!(c.admissible && c.residual <= tol.residual)) continue;
      c.items = {0, j};
      rep.pair_solutions.push_back(to_double_candidate(c));
    }
  }
  rep.codes.push_back("exact");
  return rep;
}

std::optional<MixtureModel> find_nonidentifiable_3item(double lambda, std::uint64_t seed, int max_tries) {
  Rng rng(seed);
  auto simplex3 = [&rng]() {
    std::array<double, 3> w{rng.exponential(), rng.exponential(), rng.exponential()};
    const double s = w[0] + w[1] + w[2];
    for (double& v : w) v /= s;
    return w;
  };
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    const auto a = simplex3();
    const auto b0 = simplex3();
    auto model_at = [&](double s) {
      MixtureModel m;
      m.lambda = lambda;
      m.a = {a[0], a[1], a[2]};
      m.b = {s * b0[0], b0[1], 1 - s * b0[0] - b0[1]};
      return m;
    };
    auto gate = [&](double s) {
      const MixtureModel m = model_at(s);
      const OracleTable t = oracle_table(m, all_slates(3));
      const auto s12 = pair_system_input(t, Slate{0, 1, 2}, 0, 1, false);
      const auto s13 = pair_system_input(t, Slate{0, 1, 2}, 0, 2, false);
      return resultant_gate_W(deflated_cubic(s12, m.b[0]), deflated_cubic(s13, m.b[0]));
    };
    const double hi = (1 - b0[1]) / b0[0] * 0.98;
    const int steps = 60;
    double prev_s = 0.05;
    double prev = gate(prev_s);
    for (int k = 1; k < steps; ++k) {
      const double s = 0.05 + (hi - 0.05) * k / (steps - 1);
      const double g = gate(s);
      if (std::signbit(g) != std::signbit(prev)) {
        double lo = prev_s, up = s, glo = prev;
        for (int it = 0; it < 200 && up - lo > 1e-16 * std::max(1.0, up); ++it) {
          const double mid = 0.5 * (lo + up);
          const double gm = gate(mid);
          if (std::signbit(gm) == std::signbit(glo)) {
            lo = mid;
            glo = gm;
          } else {
            up = mid;
          }
        }
        const MixtureModel m = model_at(0.5 * (lo + up));
        const ThreeItemResult<double> r = solve_3item(oracle_table(m, all_slates(3)));
        int positive = 0;
        for (const auto& c : r.solutions) {
          bool pos = true;
          for (int i = 0; i < 3; ++i) pos = pos && c.a[i] > 0 && c.b[i] > 0;
          positive += pos;
        }
        if (positive >= 2) return m;
        break;
      }
      prev_s = s;
      prev = g;
    }
  }
  return std::nullopt;
}

template double pair_system_residual(const PairSystemInput<double>&, const PairTuple<double>&);
template double pair_system_residual(const PairSystemInput<Rational>&, const PairTuple<Rational>&);
template std::vector<CandidateSolution<double>> solve_pair_system(const PairSystemInput<double>&, const Tolerances&);
template std::vector<CandidateSolution<Rational>> solve_pair_system(const PairSystemInput<Rational>&,
                                                                    const Tolerances&);
template ThreeItemResult<double> solve_3item(const BasicOracleTable<double>&, const Tolerances&);
template ThreeItemResult<Rational> solve_3item(const BasicOracleTable<Rational>&, const Tolerances&);
template double table_residual(const BasicOracleTable<double>&, const std::vector<double>&,
                               const std::vector<double>&);
template double table_residual(const BasicOracleTable<Rational>&, const std::vector<Rational>&,
                               const std::vector<Rational>&);
template double candidate_distance(const CandidateSolution<double>&, const CandidateSolution<double>&);
template double candidate_distance(const CandidateSolution<Rational>&, const CandidateSolution<Rational>&);

}  // namespace mnlmix
