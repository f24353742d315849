#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "mnlmix/config.hpp"
#include "mnlmix/errors.hpp"
#include "mnlmix/numeric.hpp"

namespace mnlmix {

// Items are 0-based inside the library; files and the CLI use 1-based indices.
using Slate = std::vector<int>;

// Sorts, checks range and distinctness. Throws DomainError.
Slate make_slate(std::vector<int> items, int n, std::size_t min_size = 1);
Slate full_slate(int n);
Slate slate_without(const Slate& slate, int item);
// Position of item inside a sorted slate, or -1.
int slate_position(const Slate& slate, int item);
// All slates of size >= 2 inside `universe`, ordered by size then lexicographically.
std::vector<Slate> sub_slates(const Slate& universe);

template <class T>
struct BasicMixtureModel {
  std::vector<T> a;
  std::vector<T> b;
  T lambda{1};

  int n() const { return static_cast<int>(a.size()); }
  T mu() const { return T(1) / (T(1) + lambda); }
};

using MixtureModel = BasicMixtureModel<double>;
using RationalMixtureModel = BasicMixtureModel<Rational>;

// Throws ParameterError when n < 3, lambda <= 0, entries are not positive or
// do not sum to one (exactly for rationals, within 1e-12 for doubles).
template <class T>
void validate_model(const BasicMixtureModel<T>& model);

MixtureModel to_double(const RationalMixtureModel& model);
double lambda_from_mu(double mu);

template <class T>
std::vector<T> slate_distribution(const BasicMixtureModel<T>& model, const Slate& slate) {
  const int n = model.n();
  for (int i : slate) {
    if (i < 0 || i >= n) throw DomainError("slate index out of range");
  }
  if (slate.empty()) throw DomainError("empty slate");
  T sa(0), sb(0);
  for (int i : slate) {
    sa += model.a[i];
    sb += model.b[i];
  }
  const T mu = model.mu();
  const T nu = T(1) - mu;
  std::vector<T> d;
  d.reserve(slate.size());
  for (int i : slate) d.push_back(mu * model.a[i] / sa + nu * model.b[i] / sb);
  return d;
}

// C_T = (1 + lambda) D_T, computed through slate_distribution.
template <class T>
std::vector<T> scaled_choice(const BasicMixtureModel<T>& model, const Slate& slate) {
  std::vector<T> d = slate_distribution(model, slate);
  const T s = T(1) + model.lambda;
  for (T& v : d) v *= s;
  return d;
}

template <class T>
class BasicOracleTable {
 public:
  BasicOracleTable() = default;
  BasicOracleTable(int n, T lambda) : n_(n), lambda_(std::move(lambda)) {}

  int n() const { return n_; }
  const T& lambda() const { return lambda_; }

  void set(const Slate& slate, std::vector<T> values) { entries_[slate] = std::move(values); }
  bool contains(const Slate& slate) const { return entries_.count(slate) > 0; }
  const std::vector<T>& row(const Slate& slate) const {
    auto it = entries_.find(slate);
    if (it == entries_.end()) throw InputError("oracle is missing a slate");
    return it->second;
  }
  // C_T(item) for an item of the slate.
  const T& value(const Slate& slate, int item) const {
    const std::vector<T>& r = row(slate);
    const int pos = slate_position(slate, item);
    if (pos < 0) throw DomainError("item not in slate");
    return r[pos];
  }
  const std::map<Slate, std::vector<T>>& entries() const { return entries_; }

 private:
  int n_ = 0;
  T lambda_{1};
  std::map<Slate, std::vector<T>> entries_;
};

using OracleTable = BasicOracleTable<double>;
using RationalOracleTable = BasicOracleTable<Rational>;

template <class T>
BasicOracleTable<T> oracle_table(const BasicMixtureModel<T>& model, const std::vector<Slate>& slates) {
  BasicOracleTable<T> table(model.n(), model.lambda);
  for (const Slate& s : slates) {
    const Slate sorted = make_slate(s, model.n(), 2);
    table.set(sorted, scaled_choice(model, sorted));
  }
  return table;
}

// Every slate of size >= 2 in [n]. Exponential; meant for n <= 12.
std::vector<Slate> all_slates(int n);

// a and b independently uniform on the simplex (normalized exponential
// spacings), clamped to `floor` and renormalized.
MixtureModel random_instance(int n, double lambda, std::uint64_t seed, double floor = kWeightFloor);

// a_i proportional to ratio^(i/(n-1)), b in the opposite order.
MixtureModel geometric_instance(int n, double lambda, double ratio);

struct EmpiricalRow {
  Slate slate;
  std::vector<std::int64_t> counts;
  std::vector<double> C;  // (1 + lambda) * counts / N
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

// N i.i.d. choices from the slate distribution; the stream is derived from
// (seed, slate) so rows are reproducible independently of each other.
EmpiricalRow sample_empirical(const MixtureModel& model, const Slate& slate, std::int64_t N,
                              std::uint64_t seed);

// Answers slate queries. Implementations may be exact, sampled or table-backed.
class SlateOracle {
 public:
  virtual ~SlateOracle() = default;
  virtual int n() const = 0;
  virtual double lambda() const = 0;
  virtual std::vector<double> query(const Slate& slate) = 0;
  // Samples consumed per slate, zero for exact oracles.
  virtual std::int64_t samples_per_slate() const { return 0; }
};

class ExactOracle : public SlateOracle {
 public:
  explicit ExactOracle(MixtureModel model) : model_(std::move(model)) {}
  int n() const override { return model_.n(); }
  double lambda() const override { return model_.lambda; }
  std::vector<double> query(const Slate& slate) override { return scaled_choice(model_, slate); }

 private:
  MixtureModel model_;
};

class SampledOracle : public SlateOracle {
 public:
  SampledOracle(MixtureModel model, std::int64_t N, std::uint64_t seed)
      : model_(std::move(model)), N_(N), seed_(seed) {}
  int n() const override { return model_.n(); }
  double lambda() const override { return model_.lambda; }
  std::vector<double> query(const Slate& slate) override {
    return sample_empirical(model_, slate, N_, seed_).C;
  }
  std::int64_t samples_per_slate() const override { return N_; }

 private:
  MixtureModel model_;
  std::int64_t N_;
  std::uint64_t seed_;
};

class TableOracle : public SlateOracle {
 public:
  explicit TableOracle(OracleTable table) : table_(std::move(table)) {}
  int n() const override { return table_.n(); }
  double lambda() const override { return table_.lambda(); }
  std::vector<double> query(const Slate& slate) override { return table_.row(slate); }

 private:
  OracleTable table_;
};

}  // namespace mnlmix
