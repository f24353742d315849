#include "mnlmix/choice_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mnlmix/rng.hpp"

namespace mnlmix {

Slate make_slate(std::vector<int> items, int n, std::size_t min_size) {
  std::sort(items.begin(), items.end());
  if (std::adjacent_find(items.begin(), items.end()) != items.end())
    throw DomainError("slate has repeated items");
  for (int i : items)
    if (i < 0 || i >= n) throw DomainError("slate index out of range");
  if (items.size() < min_size) throw DomainError("slate too small");
  return items;
}

Slate full_slate(int n) {
  Slate s(n);
  for (int i = 0; i < n; ++i) s[i] = i;
  return s;
}

Slate slate_without(const Slate& slate, int item) {
  Slate s;
  for (int i : slate)
    if (i != item) s.push_back(i);
  return s;
}

int slate_position(const Slate& slate, int item) {
  auto it = std::lower_bound(slate.begin(), slate.end(), item);
  if (it == slate.end() || *it != item) return -1;
  return static_cast<int>(it - slate.begin());
}

std::vector<Slate> sub_slates(const Slate& universe) {
  const int m = static_cast<int>(universe.size());
  std::vector<Slate> out;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    Slate s;
    for (int k = 0; k < m; ++k)
      if (mask & (1u << k)) s.push_back(universe[k]);
    if (s.size() >= 2) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const Slate& x, const Slate& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

std::vector<Slate> all_slates(int n) { return sub_slates(full_slate(n)); }

template <class T>
void validate_model(const BasicMixtureModel<T>& model) {
  if (model.n() < 3) throw ParameterError("model needs n >= 3");
  if (static_cast<int>(model.b.size()) != model.n()) throw ParameterError("a and b differ in length");
  if (!(model.lambda > T(0))) throw ParameterError("lambda must be positive");
  for (const auto* w : {&model.a, &model.b}) {
    T sum(0);
    for (const T& v : *w) {
      if (!(v > T(0))) throw ParameterError("weights must be positive");
      sum += v;
    }
    if constexpr (NumericTraits<T>::exact) {
      if (sum != T(1)) throw ParameterError("weights must sum to one");
    } else {
      if (std::abs(sum - 1.0) > 1e-12) throw ParameterError("weights must sum to one");
    }
  }
}

template void validate_model(const BasicMixtureModel<double>&);
template void validate_model(const BasicMixtureModel<Rational>&);

MixtureModel to_double(const RationalMixtureModel& model) {
  MixtureModel m;
  for (const Rational& v : model.a) m.a.push_back(to_double(v));
  for (const Rational& v : model.b) m.b.push_back(to_double(v));
  m.lambda = to_double(model.lambda);
  return m;
}

double lambda_from_mu(double mu) {
  if (!(mu > 0 && mu < 1)) throw ParameterError("mu must lie in (0, 1)");
  return (1.0 - mu) / mu;
}

namespace {

std::vector<double> uniform_simplex(int n, Rng& rng, double floor) {
  std::vector<double> w(n);
  double s = 0;
  for (double& v : w) s += (v = rng.exponential());
  for (double& v : w) v /= s;
  // Clamp and renormalize until the floor holds after normalization.
  for (int it = 0; it < 64; ++it) {
    bool changed = false;
    for (double& v : w)
      if (v < floor) {
        v = floor;
        changed = true;
      }
    s = 0;
    for (double v : w) s += v;
    for (double& v : w) v /= s;
    if (!changed) break;
  }
  return w;
}

}  // namespace

MixtureModel random_instance(int n, double lambda, std::uint64_t seed, double floor) {
  if (n < 3) throw ParameterError("random_instance needs n >= 3");
  if (!(lambda > 0)) throw ParameterError("lambda must be positive");
  if (!(floor > 0) || floor * n >= 1) throw ParameterError("infeasible weight floor");
  Rng root(seed);
  Rng ra = root.split("a");
  Rng rb = root.split("b");
  MixtureModel m;
  m.lambda = lambda;
  m.a = uniform_simplex(n, ra, floor);
  m.b = uniform_simplex(n, rb, floor);
  return m;
}

MixtureModel geometric_instance(int n, double lambda, double ratio) {
  if (n < 3) throw ParameterError("geometric_instance needs n >= 3");
  MixtureModel m;
  m.lambda = lambda;
  const double rho = std::pow(ratio, 1.0 / (n - 1));
  double sa = 0, sb = 0;
  for (int i = 0; i < n; ++i) {
    m.a.push_back(std::pow(rho, i));
    m.b.push_back(std::pow(rho, n - 1 - i));
    sa += m.a.back();
    sb += m.b.back();
  }
  for (double& v : m.a) v /= sa;
  for (double& v : m.b) v /= sb;
  return m;
}

EmpiricalRow sample_empirical(const MixtureModel& model, const Slate& slate, std::int64_t N,
                              std::uint64_t seed) {
  if (N < 1) throw ParameterError("sample size must be positive");
  const std::vector<double> d = slate_distribution(model, slate);
  Rng rng = Rng(seed).split(hash_items(slate));
  EmpiricalRow row;
  row.slate = slate;
  row.samples = N;
  row.seed = seed;
  row.counts.assign(d.size(), 0);
  // Multinomial as a chain of conditional binomials.
  std::int64_t left = N;
  double mass = 1.0;
  for (std::size_t k = 0; k + 1 < d.size() && left > 0; ++k) {
    const double p = std::clamp(d[k] / mass, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> bin(left, p);
    row.counts[k] = bin(rng);
    left -= row.counts[k];
    mass -= d[k];
    if (mass <= 0) break;
  }
  row.counts.back() += left;
  const double scale = (1.0 + model.lambda) / static_cast<double>(N);
  for (std::int64_t c : row.counts) row.C.push_back(scale * static_cast<double>(c));
  return row;
}

}  // namespace mnlmix
