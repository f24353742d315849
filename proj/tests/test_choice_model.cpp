#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mnlmix/choice_model.hpp"

namespace mnlmix {
namespace {

MixtureModel small_model() {
  MixtureModel m;
  m.lambda = 2;
  m.a = {0.5, 0.3, 0.2};
  m.b = {0.1, 0.3, 0.6};
  return m;
}

TEST(SlateTest, MakeSlateSortsAndValidates) {
  EXPECT_EQ(make_slate({3, 1, 2}, 4), (Slate{1, 2, 3}));
  EXPECT_THROW(make_slate({1, 1}, 4), DomainError);
  EXPECT_THROW(make_slate({0, 4}, 4), DomainError);
  EXPECT_THROW(make_slate({0}, 4, 2), DomainError);
}

TEST(SlateTest, Helpers) {
  EXPECT_EQ(full_slate(3), (Slate{0, 1, 2}));
  EXPECT_EQ(slate_without({0, 1, 2}, 1), (Slate{0, 2}));
  EXPECT_EQ(slate_position({0, 2, 5}, 5), 2);
  EXPECT_EQ(slate_position({0, 2, 5}, 1), -1);
}

TEST(SlateTest, SubSlateCounts) {
  // 2^k - k - 1 slates of size >= 2.
  for (int k = 2; k <= 6; ++k)
    EXPECT_EQ(static_cast<int>(sub_slates(full_slate(k)).size()), (1 << k) - k - 1);
  const auto s = sub_slates(full_slate(3));
  EXPECT_EQ(s.front(), (Slate{0, 1}));
  EXPECT_EQ(s.back(), (Slate{0, 1, 2}));
  EXPECT_EQ(all_slates(4).size(), 11u);
}

TEST(ModelTest, ValidateRejectsBadModels) {
  MixtureModel m = small_model();
  EXPECT_NO_THROW(validate_model(m));
  m.lambda = 0;
  EXPECT_THROW(validate_model(m), ParameterError);
  m = small_model();
  m.a[0] = 0.6;
  EXPECT_THROW(validate_model(m), ParameterError);
  m = small_model();
  m.b = {0.5, 0.5, 0.0};
  EXPECT_THROW(validate_model(m), ParameterError);
  m = small_model();
  m.a.pop_back();
  m.b.pop_back();
  EXPECT_THROW(validate_model(m), ParameterError);
}

TEST(ModelTest, MuAndLambda) {
  EXPECT_DOUBLE_EQ(small_model().mu(), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(lambda_from_mu(0.25), 3.0);
  EXPECT_THROW(lambda_from_mu(1.0), ParameterError);
}

TEST(ModelTest, SlateDistributionByHand) {
  const MixtureModel m = small_model();
  const auto d = slate_distribution(m, {0, 2});
  // mu = 1/3: (1/3)(0.5/0.7) + (2/3)(0.1/0.7).
  EXPECT_NEAR(d[0], (0.5 / 0.7) / 3 + 2 * (0.1 / 0.7) / 3, 1e-15);
  EXPECT_NEAR(d[0] + d[1], 1.0, 1e-15);
  const auto c = scaled_choice(m, full_slate(3));
  EXPECT_NEAR(std::accumulate(c.begin(), c.end(), 0.0), 3.0, 1e-14);
  EXPECT_NEAR(c[1], 0.3 + 2 * 0.3, 1e-15);
}

TEST(ModelTest, RationalDistributionIsExact) {
  RationalMixtureModel m;
  m.lambda = 2;
  m.a = {Rational(1, 2), Rational(1, 3), Rational(1, 6)};
  m.b = {Rational(1, 4), Rational(1, 4), Rational(1, 2)};
  const auto c = scaled_choice(m, {0, 1});
  EXPECT_EQ(c[0], Rational(3, 5) + 2 * Rational(1, 2));
  EXPECT_EQ(c[0] + c[1], Rational(3));
}

TEST(ModelTest, RandomInstanceOnSimplex) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MixtureModel m = random_instance(6, 1.5, seed);
    EXPECT_NO_THROW(validate_model(m));
    EXPECT_EQ(m.n(), 6);
  }
  const MixtureModel x = random_instance(5, 2, 3), y = random_instance(5, 2, 3);
  EXPECT_EQ(x.a, y.a);
  EXPECT_EQ(x.b, y.b);
  EXPECT_NE(random_instance(5, 2, 4).a, x.a);
}

TEST(ModelTest, GeometricInstanceRatio) {
  const MixtureModel m = geometric_instance(6, 2, 8);
  EXPECT_NO_THROW(validate_model(m));
  EXPECT_NEAR(m.a.back() / m.a.front(), 8.0, 1e-12);
  EXPECT_NEAR(m.b.front() / m.b.back(), 8.0, 1e-12);
}

TEST(EmpiricalTest, CountsSumAndReproduce) {
  const MixtureModel m = small_model();
  const EmpiricalRow r = sample_empirical(m, full_slate(3), 5000, 17);
  EXPECT_EQ(std::accumulate(r.counts.begin(), r.counts.end(), std::int64_t{0}), 5000);
  EXPECT_NEAR(std::accumulate(r.C.begin(), r.C.end(), 0.0), 3.0, 1e-12);
  const EmpiricalRow again = sample_empirical(m, full_slate(3), 5000, 17);
  EXPECT_EQ(r.counts, again.counts);
  EXPECT_NE(sample_empirical(m, full_slate(3), 5000, 18).counts, r.counts);
}

TEST(EmpiricalTest, ConvergesToDistribution) {
  const MixtureModel m = small_model();
  const auto d = slate_distribution(m, full_slate(3));
  const EmpiricalRow r = sample_empirical(m, full_slate(3), 1000000, 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.counts[i] / 1e6, d[i], 3e-3);
}

TEST(OracleTest, TableAndOracles) {
  const MixtureModel m = small_model();
  const OracleTable t = oracle_table(m, all_slates(3));
  EXPECT_TRUE(t.contains({0, 2}));
  EXPECT_THROW(t.row({0, 3}), InputError);
  EXPECT_DOUBLE_EQ(t.value({0, 1, 2}, 2), scaled_choice(m, {0, 1, 2})[2]);
  ExactOracle exact(m);
  TableOracle table(t);
  EXPECT_EQ(exact.query({1, 2}), table.query({1, 2}));
  SampledOracle sampled(m, 1000, 1);
  EXPECT_EQ(sampled.samples_per_slate(), 1000);
  EXPECT_EQ(sampled.query({0, 1}), sampled.query({0, 1}));
}

}  // namespace
}  // namespace mnlmix
