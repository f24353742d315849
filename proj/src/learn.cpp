#include "mnlmix/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Core>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "mnlmix/identify.hpp"

namespace mnlmix {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class CountingOracle {
 public:
  explicit CountingOracle(SlateOracle& inner) : inner_(inner) {}
  const std::vector<double>& query(const Slate& slate) {
    auto it = cache_.find(slate);
    if (it == cache_.end()) it = cache_.emplace(slate, inner_.query(slate)).first;
    return it->second;
  }
  int distinct() const { return static_cast<int>(cache_.size()); }
  std::vector<std::pair<Slate, std::vector<double>>> rows() const {
    return {cache_.begin(), cache_.end()};
  }
  double value(const Slate& slate, int item) { return query(slate)[slate_position(slate, item)]; }

 private:
  SlateOracle& inner_;
  std::map<Slate, std::vector<double>> cache_;
};

bool fatal(const std::string& code) {
  return code == status::kKViolation || code == status::kOracleInconsistent ||
         code == status::kDegenerateInstance || code == status::kTooNoisy;
}

struct BlockSolution {
  std::vector<double> a, b;
};

// Block candidates from one b_1 value, main branch only.
std::optional<BlockSolution> extend_block(double x, const std::vector<PairSystemInput<double>>& systems,
                                          const Tolerances& tol) {
  const int k = static_cast<int>(systems.size());
  BlockSolution s;
  s.a.assign(k, 0);
  s.b.assign(k, 0);
  s.b[0] = x;
  s.a[0] = systems[1].full_i - systems[1].lambda * x;
  for (int j = 1; j < k; ++j) {
    const auto t = BackSubstitution<double>::from(systems[j]).evaluate(x, tol.den(systems[j].lambda));
    if (!t) return std::nullopt;
    s.a[j] = t->a_j;
    s.b[j] = t->b_j;
  }
  return s;
}

// Model minus observation over the given rows, weights parameterized by logs.
struct FitFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const std::vector<std::pair<Slate, std::vector<double>>>* rows = nullptr;
  double lambda = 1;
  int n = 0;
  int m = 0;

  int inputs() const { return 2 * n; }
  int values() const { return m; }

  int operator()(const Eigen::VectorXd& z, Eigen::VectorXd& f) const {
    const Eigen::VectorXd wa = (z.head(n).array() - z.head(n).maxCoeff()).exp();
    const Eigen::VectorXd wb = (z.tail(n).array() - z.tail(n).maxCoeff()).exp();
    int r = 0;
    for (const auto& [slate, obs] : *rows) {
      double sa = 0, sb = 0;
      for (int i : slate) {
        sa += wa[i];
        sb += wb[i];
      }
      for (std::size_t t = 0; t < slate.size(); ++t)
        f[r++] = wa[slate[t]] / sa + lambda * wb[slate[t]] / sb - obs[t];
    }
    return 0;
  }
};

void normalize(std::vector<double>& w) {
  double s = 0;
  for (double v : w) s += v;
  for (double& v : w) v /= s;
}

// Keeps entries positive so that the output stays on the open simplex.
void clamp_positive(std::vector<double>& w) {
  for (double& v : w) v = std::max(v, kWeightFloor);
  normalize(w);
}

LearnReport run_pipeline(CountingOracle& oracle, int n, double lambda, const LearnConfig& cfg, bool sampled) {
  const Tolerances& tol = cfg.tol;
  const int k = cfg.k;
  if (k < 3 || k > n) throw ParameterError("block size k must satisfy 3 <= k <= n");
  LearnReport rep;
  if (k == 3) rep.status.push_back(status::kSmallK);

  // Block: every slate inside [k].
  const Slate u = full_slate(k);
  OracleTable block(k, lambda);
  for (const Slate& s : sub_slates(u)) block.set(s, oracle.query(s));
  rep.block_queries = static_cast<int>(sub_slates(u).size());
  std::vector<PairSystemInput<double>> systems(k);
  for (int j = 1; j < k; ++j) systems[j] = pair_system_input(block, u, 0, j, false);

  std::vector<CandidateSolution<double>> survivors;
  const bool unit = std::abs(lambda - 1) <= 1e-12;
  if (!sampled) {
    PairSystemInput<double> base = systems[1];
    for (const auto& pc : solve_pair_system(base, tol)) {
      if (!pc.admissible) continue;
      for (auto& c : extend_from_b1(pc.b[0], systems, tol)) {
        c.residual = table_residual(block, c.a, c.b);
        polish_candidate(block, c, tol);
        bool adm = true;
        for (const auto* w : {&c.a, &c.b})
          for (double v : *w) adm = adm && v > -tol.adm && v < 1 + tol.adm;
        if (adm && c.residual <= tol.residual) survivors.push_back(std::move(c));
      }
    }
    // Merge duplicates (and swaps at lambda = 1).
    std::vector<CandidateSolution<double>> classes;
    for (auto& c : survivors) {
      bool dup = false;
      for (const auto& d : classes) {
        CandidateSolution<double> sw = c;
        std::swap(sw.a, sw.b);
        if (candidate_distance(c, d) <= tol.dedupe || (unit && candidate_distance(sw, d) <= tol.dedupe))
          dup = true;
      }
      if (!dup) classes.push_back(std::move(c));
    }
    survivors = std::move(classes);
    if (survivors.empty()) {
      rep.status.push_back(status::kOracleInconsistent);
      return rep;
    }
    if (survivors.size() > 1) {
      rep.status.push_back(status::kKViolation);
      return rep;
    }
  } else {
    // Closest-to-real root with real part in (0, 1); ties go to the block residual.
    const Polynomial<double> P = build_quartic_P(systems[1]);
    RootSet rs;
    try {
      rs = solve_polynomial(P, tol);
    } catch (const ShapeError&) {
      rep.status.push_back(status::kTooNoisy);
      return rep;
    }
    struct Pick {
      double imag;
      double residual;
      BlockSolution sol;
    };
    std::vector<Pick> picks;
    for (const auto& r : rs.roots) {
      if (r.imag() < 0 || !(r.real() > 0 && r.real() < 1)) continue;
      const auto sol = extend_block(r.real(), systems, tol);
      if (!sol) continue;
      picks.push_back({std::abs(r.imag()), table_residual(block, sol->a, sol->b), *sol});
    }
    if (picks.empty()) {
      rep.status.push_back(status::kTooNoisy);
      return rep;
    }
    std::sort(picks.begin(), picks.end(), [](const Pick& x, const Pick& y) { return x.imag < y.imag; });
    std::size_t tied = 1;
    while (tied < picks.size() &&
           picks[tied].imag - picks[0].imag < cfg.selection_tol * (1 + picks[0].imag))
      ++tied;
    std::size_t best = 0;
    if (tied > 1) {
      rep.status.push_back(status::kAmbiguous);
      for (std::size_t t = 1; t < tied; ++t)
        if (picks[t].residual < picks[best].residual) best = t;
    }
    CandidateSolution<double> c;
    c.a = picks[best].sol.a;
    c.b = picks[best].sol.b;
    c.residual = picks[best].residual;
    survivors.push_back(std::move(c));
  }
  const std::vector<double> ak = survivors[0].a;
  const std::vector<double> bk = survivors[0].b;

  std::vector<double> a(n), b(n);
  const Slate full = full_slate(n);
  const Slate drop0 = slate_without(full, 0);
  const double c0 = oracle.value(full, 0);
  std::vector<PartnerMap<double>> tail;
  std::vector<double> cfull(n), cdrop0(n);
  for (int j = 0; j < n; ++j) cfull[j] = oracle.value(full, j);
  for (int j = 1; j < n; ++j) cdrop0[j] = oracle.value(drop0, j);
  for (int j = k; j < n; ++j) tail.push_back(partner_map(lambda, c0, cfull[j], cdrop0[j]));
  std::vector<double> cdropj(n, 0);
  for (int j = 1; j < n; ++j) cdropj[j] = oracle.value(slate_without(full, j), 0);
  // Value requests: three per (1, j) system beyond the block and C_{[n]\{j}}(1)
  // for each block item j >= 2 (block slates themselves when n == k).
  rep.extension_queries = 3 * (n - k) + (k - 1);

  const double b1 = bk[0];
  auto assemble = [&](double s, std::vector<double>& aa, std::vector<double>& bb) {
    const double x = b1 * s;
    for (int j = 0; j < k; ++j) bb[j] = bk[j] * s;
    for (int j = k; j < n; ++j) {
      const double d = tail[j - k].denominator(x);
      bb[j] = d == 0 ? kInf : tail[j - k].numerator(x) / d;
    }
    for (int j = 0; j < n; ++j) aa[j] = cfull[j] - lambda * bb[j];
  };
  auto residual = [&](double s) {
    std::vector<double> aa(n), bb(n);
    assemble(s, aa, bb);
    double r = 0;
    for (int j = 0; j < n; ++j) {
      if (!(aa[j] > -tol.adm && aa[j] < 1 + tol.adm)) return kInf;
      if (!(bb[j] > -tol.adm && bb[j] < 1 + tol.adm)) return kInf;
    }
    for (int j = 1; j < n; ++j)
      r = std::max(r, std::abs(aa[0] / (1 - aa[j]) + lambda * bb[0] / (1 - bb[j]) - cdropj[j]));
    for (int j = 1; j < k; ++j) r = std::max(r, std::abs(aa[j] / aa[0] - ak[j] / ak[0]));
    return r;
  };
  double s = 1;
  try {
    s = solve_normalization(b1, tail, residual);
  } catch (const DegenerateInstanceError&) {
    if (!sampled) {
      rep.status.push_back(status::kDegenerateInstance);
      return rep;
    }
    // Noisy data can push the cleared quadratic off the real axis; take the
    // best grid point instead.
    double best = kInf;
    for (int g = 1; g <= 2000; ++g) {
      const double t = g / 2000.0;
      const double r = residual(t);
      if (r < best) {
        best = r;
        s = t;
      }
    }
    if (!(best < kInf)) {
      rep.status.push_back(status::kDegenerateInstance);
      return rep;
    }
  }
  rep.normalization = s;
  assemble(s, a, b);

  double sum_a = 0;
  for (double v : a) sum_a += v;
  if (!sampled && std::abs(sum_a - 1) > 1e-8) rep.status.push_back(status::kNormalizationCheck);

  if (sampled) {
    const Slate full = full_slate(n);
    const std::vector<double>& row = oracle.query(full);
    for (int i = 0; i < n; ++i) {
      const double p = row[i] / (1 + lambda) * n;
      if (p < cfg.c_low || p > cfg.c_high) {
        rep.status.push_back(status::kIrregular);
        break;
      }
    }
  }

  clamp_positive(a);
  clamp_positive(b);
  if (cfg.refine) refine_least_squares(oracle.rows(), lambda, a, b);
  rep.a_hat = a;
  rep.b_hat = b;
  rep.queries = rep.block_queries + rep.extension_queries;
  rep.distinct_slates = oracle.distinct();
  if (std::none_of(rep.status.begin(), rep.status.end(), fatal)) rep.status.insert(rep.status.begin(), status::kOk);
  return rep;
}

}  // namespace

bool LearnReport::ok() const {
  for (const auto& s : status)
    if (fatal(s)) return false;
  return !a_hat.empty();
}

bool LearnReport::has(const std::string& code) const {
  return std::find(status.begin(), status.end(), code) != status.end();
}

double max_rel_error(const std::vector<double>& a_hat, const std::vector<double>& b_hat,
                     const std::vector<double>& a, const std::vector<double>& b, bool allow_swap) {
  if (a_hat.size() != a.size() || b_hat.size() != b.size()) return kInf;
  auto err = [&](const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      m = std::max(m, std::abs(x[i] - a[i]) / a[i] + std::abs(y[i] - b[i]) / b[i]);
    return m;
  };
  const double direct = err(a_hat, b_hat);
  return allow_swap ? std::min(direct, err(b_hat, a_hat)) : direct;
}

int query_offset(int k) { return (1 << k) - 3 * k - 2; }

std::int64_t default_samples(int n, double eps) {
  if (!(eps > 0 && eps <= 0.2)) throw ParameterError("eps must lie in (0, 0.2]");
  return static_cast<std::int64_t>(std::ceil(8.0 * n * n * n / (eps * eps)));
}

LearnReport learn_from_oracle(SlateOracle& oracle, const LearnConfig& cfg) {
  CountingOracle counting(oracle);
  return run_pipeline(counting, oracle.n(), oracle.lambda(), cfg, false);
}

LearnReport learn_from_oracle(const MixtureModel& model, const LearnConfig& cfg) {
  validate_model(model);
  ExactOracle exact(model);
  LearnReport rep = learn_from_oracle(exact, cfg);
  if (rep.ok()) rep.max_rel_error = max_rel_error(rep.a_hat, rep.b_hat, model.a, model.b,
                                                  std::abs(model.lambda - 1) <= 1e-12);
  return rep;
}

LearnReport learn_from_estimates(SlateOracle& oracle, const LearnConfig& cfg) {
  CountingOracle counting(oracle);
  LearnReport rep = run_pipeline(counting, oracle.n(), oracle.lambda(), cfg, true);
  rep.samples_per_slate = oracle.samples_per_slate();
  rep.samples = rep.samples_per_slate * counting.distinct();
  return rep;
}

LearnReport learn_from_samples(const MixtureModel& model, const LearnConfig& cfg) {
  validate_model(model);
  const std::int64_t N = cfg.samples_per_slate > 0 ? cfg.samples_per_slate : default_samples(model.n(), cfg.eps);
  SampledOracle sampled(model, N, cfg.seed);
  LearnReport rep = learn_from_estimates(sampled, cfg);
  if (rep.ok()) rep.max_rel_error = max_rel_error(rep.a_hat, rep.b_hat, model.a, model.b,
                                                  std::abs(model.lambda - 1) <= 1e-12);
  return rep;
}

std::vector<double> normalization_roots(double b1_rel, const std::vector<PartnerMap<double>>& tail,
                                        double tau_den) {
  if (tail.empty()) return {1.0};
  // s D(b1 s) + sum_j N_j(b1 s) - D(b1 s) = 0 as a polynomial in s.
  const Polynomial<double> scale{0.0, b1_rel};
  auto compose = [&scale](const Polynomial<double>& p) {
    Polynomial<double> out;
    Polynomial<double> power = Polynomial<double>::constant(1.0);
    for (double c : p.coeffs()) {
      out += power * c;
      power = power * scale;
    }
    return out;
  };
  const Polynomial<double> D = compose(tail[0].denominator);
  Polynomial<double> g = Polynomial<double>{0.0, 1.0} * D - D;
  for (const auto& m : tail) g += compose(m.numerator);
  std::vector<double> out;
  RootSet rs;
  try {
    rs = solve_polynomial(g);
  } catch (const ShapeError&) {
    return out;
  }
  for (double s : rs.real_roots()) {
    if (!(s > 0 && s <= 1 + 1e-12)) continue;
    bool adm = true;
    for (const auto& m : tail) {
      const auto bj = m(b1_rel * s, tau_den);
      adm = adm && bj && *bj > 0 && *bj < 1;
    }
    if (adm) out.push_back(s);
  }
  return out;
}

double solve_normalization(double b1_rel, const std::vector<PartnerMap<double>>& tail,
                           const std::function<double(double)>& residual) {
  if (tail.empty()) return 1.0;
  auto score = [&residual](double s) { return residual ? residual(s) : 0.0; };
  std::vector<double> roots = normalization_roots(b1_rel, tail);
  if (roots.empty()) {
    // Bracket sign changes of s + sum f_j - 1 on a grid and bisect.
    auto g = [&](double s) {
      double v = s - 1;
      for (const auto& m : tail) {
        const auto bj = m(b1_rel * s, 0.0);
        if (!bj) return std::numeric_limits<double>::quiet_NaN();
        v += *bj;
      }
      return v;
    };
    const int steps = 400;
    double prev_s = 1.0 / steps;
    double prev = g(prev_s);
    for (int i = 2; i <= steps; ++i) {
      const double s = static_cast<double>(i) / steps;
      const double v = g(s);
      if (std::isfinite(prev) && std::isfinite(v) && std::signbit(prev) != std::signbit(v)) {
        double lo = prev_s, hi = s, glo = prev;
        for (int it = 0; it < 100; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = g(mid);
          if (std::signbit(gm) == std::signbit(glo)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        roots.push_back(0.5 * (lo + hi));
      }
      prev_s = s;
      prev = v;
    }
    roots.erase(std::remove_if(roots.begin(), roots.end(),
                               [&](double s) {
                                 for (const auto& m : tail) {
                                   const auto bj = m(b1_rel * s, 0.0);
                                   if (!bj || !(*bj > 0 && *bj < 1)) return true;
                                 }
                                 return false;
                               }),
                roots.end());
  }
  if (roots.empty()) throw DegenerateInstanceError("normalization has no admissible root");
  double best = roots[0];
  double best_score = score(best);
  for (double s : roots) {
    const double v = score(s);
    if (v < best_score) {
      best = s;
      best_score = v;
    }
  }
  if (!(best_score < kInf)) throw DegenerateInstanceError("normalization has no admissible root");
  return best;
}

void refine_least_squares(const std::vector<std::pair<Slate, std::vector<double>>>& rows, double lambda,
                          std::vector<double>& a, std::vector<double>& b) {
  const int n = static_cast<int>(a.size());
  FitFunctor f;
  f.rows = &rows;
  f.lambda = lambda;
  f.n = n;
  for (const auto& r : rows) f.m += static_cast<int>(r.first.size());
  if (f.m < 2 * n) return;
  Eigen::VectorXd z(2 * n);
  for (int i = 0; i < n; ++i) {
    z[i] = std::log(a[i]);
    z[n + i] = std::log(b[i]);
  }
  Eigen::NumericalDiff<FitFunctor> numdiff(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FitFunctor>> lm(numdiff);
  lm.parameters.maxfev = 4000;
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  lm.minimize(z);
  std::vector<double> ra(n), rb(n);
  const double ma = z.head(n).maxCoeff();
  const double mb = z.tail(n).maxCoeff();
  for (int i = 0; i < n; ++i) {
    ra[i] = std::exp(z[i] - ma);
    rb[i] = std::exp(z[n + i] - mb);
  }
  normalize(ra);
  normalize(rb);
  bool finite = true;
  for (int i = 0; i < n; ++i) finite = finite && std::isfinite(ra[i]) && std::isfinite(rb[i]);
  if (finite) {
    a = ra;
    b = rb;
  }
}

}  // namespace mnlmix
