#include "mnlmix/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "mnlmix/rng.hpp"

namespace mnlmix {
namespace {

constexpr double kMargin = 1e-6;

// Runs f(0..count-1) on up to `jobs` threads. Results must be written by index.
template <class F>
void parallel_for(int count, int jobs, F f) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) f(i);
    });
  for (auto& th : pool) th.join();
}

void project_pair(double& x, double& y) {
  x = std::max(x, kMargin);
  y = std::max(y, kMargin);
  const double excess = x + y - (1 - kMargin);
  if (excess > 0) {
    x -= excess / 2;
    y -= excess / 2;
    if (x < kMargin) {
      x = kMargin;
      y = 1 - 2 * kMargin;
    } else if (y < kMargin) {
      y = kMargin;
      x = 1 - 2 * kMargin;
    }
  }
}

std::array<double, 4> project(std::array<double, 4> p) {
  project_pair(p[0], p[1]);
  project_pair(p[2], p[3]);
  return p;
}

double value_or_floor(double v) { return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v; }

struct SearchResult {
  double best;
  std::array<double, 4> argmax;
  int evals;
};

SearchResult compass_search(double lambda, std::array<double, 4> x) {
  x = project(x);
  int evals = 1;
  double fx = value_or_floor(q12_discriminant(lambda, x));
  double h = 0.1;
  while (h > 1e-7 && evals < 6000) {
    bool moved = false;
    for (int d = 0; d < 4 && !moved; ++d)
      for (double sgn : {1.0, -1.0}) {
        std::array<double, 4> y = x;
        y[d] += sgn * h;
        y = project(y);
        const double fy = value_or_floor(q12_discriminant(lambda, y));
        ++evals;
        if (fy > fx) {
          x = y;
          fx = fy;
          moved = true;
          break;
        }
      }
    if (!moved) h /= 2;
  }
  return {fx, x, evals};
}

}  // namespace

RationalMixtureModel counterexample_model() {
  RationalMixtureModel m;
  m.lambda = 2;
  m.a = {Rational(2, 5), Rational(2, 5), Rational(1, 10), Rational(1, 10)};
  m.b = {Rational(3, 10), Rational(3, 10), Rational(1, 5), Rational(1, 5)};
  return m;
}

ThreeRootsInstance three_roots_instance() { return {}; }

OracleTable formal_three_item_oracle(double lambda, const std::array<double, 4>& p) {
  MixtureModel m;
  m.lambda = lambda;
  m.a = {p[0], p[1], 1 - p[0] - p[1]};
  m.b = {p[2], p[3], 1 - p[2] - p[3]};
  return oracle_table(m, all_slates(3));
}

Polynomial<double> q12_cubic(double lambda, const std::array<double, 4>& p) {
  const OracleTable t = formal_three_item_oracle(lambda, p);
  return deflated_cubic(pair_system_input(t, Slate{0, 1, 2}, 0, 1, false), p[2]);
}

double q12_discriminant(double lambda, const std::array<double, 4>& p) {
  try {
    const Polynomial<double> q = q12_cubic(lambda, p).trimmed(1e-13);
    if (q.degree() != 3) return std::numeric_limits<double>::quiet_NaN();
    return cubic_discriminant(q.unit_scaled());
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

ThreeRootsReport run_three_roots(bool exact) {
  const ThreeRootsInstance inst = three_roots_instance();
  ThreeRootsReport rep;
  rep.lambda = inst.lambda;
  rep.point = inst.point;
  const Polynomial<double> q = q12_cubic(inst.lambda, inst.point);
  rep.cubic = q.coeffs();
  rep.real_roots = solve_polynomial(q).real_roots();
  std::sort(rep.real_roots.begin(), rep.real_roots.end());
  rep.discriminant = q12_discriminant(inst.lambda, inst.point);
  rep.consistent = rep.real_roots.size() == 3 && rep.discriminant > 0;
  if (exact) {
    const std::array<const char*, 4> text{"0.0389099", "0.000870832", "0.0565171", "0.943483"};
    std::array<Rational, 4> p;
    for (int i = 0; i < 4; ++i) p[i] = parse_rational(text[i]);
    RationalMixtureModel m;
    m.lambda = Rational(5);
    m.a = {p[0], p[1], 1 - p[0] - p[1]};
    m.b = {p[2], p[3], 1 - p[2] - p[3]};
    const RationalOracleTable t = oracle_table(m, all_slates(3));
    const Polynomial<Rational> qe =
        deflated_cubic(pair_system_input(t, Slate{0, 1, 2}, 0, 1, false), p[2]);
    Rational bound(1);
    for (int i = 0; i < qe.degree(); ++i) bound = std::max(bound, 1 + abs_value(Rational(qe.coeff(i) / qe.leading())));
    rep.exact_real_roots = count_real_roots_sturm(qe, -bound, bound);
    const Rational d = cubic_discriminant(qe);
    rep.exact_discriminant_sign = d > 0 ? 1 : (d < 0 ? -1 : 0);
    rep.consistent = rep.consistent && rep.exact_real_roots == 3 && rep.exact_discriminant_sign > 0;
  }
  return rep;
}

CounterexampleReport run_counterexample(bool exact) {
  const RationalMixtureModel m = counterexample_model();
  const MixtureModel md = to_double(m);
  CounterexampleReport rep;
  rep.double_candidates = solve_pair_system(pair_system_input(md, full_slate(4), 0, 1, true));
  rep.identify = check_identifiability(md);
  rep.consistent = rep.double_candidates.size() == 2;
  if (exact) {
    rep.exact_candidates = solve_pair_system(pair_system_input(m, full_slate(4), 0, 1, true));
    rep.consistent = rep.consistent && rep.exact_candidates.size() == rep.double_candidates.size();
    for (const auto& e : rep.exact_candidates) {
      double gap = std::numeric_limits<double>::infinity();
      for (const auto& d : rep.double_candidates) {
        double g = 0;
        for (std::size_t i = 0; i < e.a.size(); ++i)
          g = std::max({g, std::abs(to_double(e.a[i]) - d.a[i]), std::abs(to_double(e.b[i]) - d.b[i])});
        gap = std::min(gap, g);
      }
      rep.max_mode_gap = std::max(rep.max_mode_gap, gap);
    }
    rep.consistent = rep.consistent && rep.max_mode_gap <= 1e-9;
  }
  return rep;
}

DiscriminantMaxReport experiment_discriminant_max(double lambda, int restarts, std::uint64_t seed,
                                                  const std::vector<std::array<double, 4>>& extra_starts,
                                                  int jobs) {
  if (restarts < 1) throw ParameterError("restarts must be >= 1");
  DiscriminantMaxReport rep;
  rep.lambda = lambda;
  const int total = restarts + static_cast<int>(extra_starts.size());
  std::vector<SearchResult> results(total);
  const Rng root(seed);
  parallel_for(total, jobs, [&](int i) {
    std::array<double, 4> start;
    if (i < static_cast<int>(extra_starts.size())) {
      start = extra_starts[i];
    } else {
      Rng r = root.split(static_cast<std::uint64_t>(i));
      for (int half = 0; half < 2; ++half) {
        const double e0 = r.exponential(), e1 = r.exponential(), e2 = r.exponential();
        const double s = e0 + e1 + e2;
        start[2 * half] = e0 / s;
        start[2 * half + 1] = e1 / s;
      }
    }
    results[i] = compass_search(lambda, start);
  });
  rep.best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < total; ++i) {
    rep.evaluations += results[i].evals;
    if (i < static_cast<int>(extra_starts.size())) {
      const double v = q12_discriminant(lambda, extra_starts[i]);
      rep.start_values.push_back(v);
      if (v > rep.best) {
        rep.best = v;
        rep.argmax = extra_starts[i];
      }
    }
    rep.restart_values.push_back(results[i].best);
    if (results[i].best > rep.best) {
      rep.best = results[i].best;
      rep.argmax = results[i].argmax;
    }
  }
  return rep;
}

LambdaThresholdReport experiment_lambda_threshold(const std::vector<double>& grid, int restarts,
                                                  std::uint64_t seed, int refine_steps, int jobs) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw ParameterError("lambda grid must be ascending");
  LambdaThresholdReport rep;
  auto sign_of = [](double v) { return v > kSignTolerance ? 1 : (v < -kSignTolerance ? -1 : 0); };
  auto add = [&](double lam) {
    const double v = experiment_discriminant_max(lam, restarts, seed, {}, jobs).best;
    rep.lambdas.push_back(lam);
    rep.best_values.push_back(v);
    rep.signs.push_back(sign_of(v));
    return rep.signs.back();
  };
  for (double lam : grid) add(lam);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (rep.signs[i] <= 0 && rep.signs[i + 1] > 0) {
      rep.bracket = std::make_pair(grid[i], grid[i + 1]);
      break;
    }
  }
  if (rep.bracket) {
    for (int step = 0; step < refine_steps; ++step) {
      const double mid = 0.5 * (rep.bracket->first + rep.bracket->second);
      if (add(mid) > 0) {
        rep.bracket->second = mid;
      } else {
        rep.bracket->first = mid;
      }
    }
  }
  return rep;
}

SweepReport experiment_identifiability_sweep(int n, double lambda, int trials, std::uint64_t seed, int jobs) {
  SweepReport rep;
  rep.n = n;
  rep.lambda = lambda;
  rep.trials = trials;
  if (trials <= 0) return rep;
  std::vector<IdentifiabilityReport> reports(trials);
  std::vector<MixtureModel> models(trials);
  parallel_for(trials, jobs, [&](int t) {
    models[t] = random_instance(n, lambda, seed + static_cast<std::uint64_t>(t));
    reports[t] = check_identifiability(models[t]);
  });
  for (int t = 0; t < trials; ++t) {
    const IdentifiabilityReport& r = reports[t];
    rep.min_gates.push_back(r.min_cross_gate());
    if (r.collapse) {
      ++rep.collapse;
      continue;
    }
    if (!r.pair_level_unique) ++rep.non_unique_pair;
    if (r.unique) {
      ++rep.unique;
    } else {
      ++rep.non_unique_full;
      rep.non_unique_seeds.push_back(seed + static_cast<std::uint64_t>(t));
      rep.counterexamples.push_back(models[t]);
    }
  }
  return rep;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw ParameterError("slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = m * sxx - sx * sx;
  if (den == 0) throw ParameterError("degenerate abscissae");
  return (m * sxy - sx * sy) / den;
}

SampleComplexityReport experiment_sample_complexity(int n, double lambda, const std::vector<double>& eps_grid,
                                                    int trials, std::uint64_t seed, std::int64_t n0,
                                                    int grid_points, int jobs) {
  if (eps_grid.empty()) throw ParameterError("empty eps grid");
  SampleComplexityReport rep;
  rep.n = n;
  rep.lambda = lambda;
  rep.trials = trials;
  const MixtureModel model = geometric_instance(n, lambda, 8.0);
  for (int g = 0; g < grid_points; ++g) rep.grid.push_back(n0 << g);
  rep.errors.assign(grid_points, std::vector<double>(trials, std::numeric_limits<double>::infinity()));
  parallel_for(grid_points * trials, jobs, [&](int idx) {
    const int g = idx / trials;
    const int t = idx % trials;
    LearnConfig cfg;
    cfg.samples_per_slate = rep.grid[g];
    cfg.seed = mix64(seed ^ mix64(static_cast<std::uint64_t>(t) + 1));
    const LearnReport r = learn_from_samples(model, cfg);
    if (r.max_rel_error) rep.errors[g][t] = *r.max_rel_error;
  });
  std::vector<double> inv_eps, nstar;
  for (double eps : eps_grid) {
    SampleComplexityRow row;
    row.eps = eps;
    for (int g = 0; g < grid_points; ++g) {
      int ok = 0;
      for (double e : rep.errors[g]) ok += e <= eps;
      if (ok >= 0.9 * trials) {
        row.n_star = rep.grid[g];
        break;
      }
    }
    if (row.n_star) {
      inv_eps.push_back(1 / eps);
      nstar.push_back(static_cast<double>(*row.n_star));
    }
    rep.rows.push_back(row);
  }
  if (inv_eps.size() >= 2) rep.slope = fitted_slope(inv_eps, nstar);
  return rep;
}

std::string SampleComplexityReport::to_csv() const {
  std::ostringstream out;
  out << "eps,n_star\n";
  for (const auto& r : rows) {
    out << r.eps << ',';
    if (r.n_star) out << *r.n_star;
    out << '\n';
  }
  return out.str();
}

}  // namespace mnlmix
