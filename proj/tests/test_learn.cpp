#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "mnlmix/identify.hpp"
#include "mnlmix/learn.hpp"

namespace mnlmix {
namespace {

// The pair quartic has two roots within 2e-3 of each other; b_1 comes back with
// about half of double precision.
MixtureModel close_root_block() {
  MixtureModel m;
  m.lambda = 0.5;
  m.a = {0.171968, 0.0851552, 0.443604, 0.0296582};
  m.b = {0.0455478, 0.0208789, 0.0469336, 0.0791266};
  for (auto* w : {&m.a, &m.b}) {
    double s = 0;
    for (double v : *w) s += v;
    for (double& v : *w) v /= s;
  }
  return m;
}

double median_sample_error(const MixtureModel& m, std::int64_t N, int trials) {
  std::vector<double> e;
  for (int t = 0; t < trials; ++t) {
    LearnConfig cfg;
    cfg.samples_per_slate = N;
    cfg.seed = 1000 + t;
    const LearnReport r = learn_from_samples(m, cfg);
    e.push_back(r.max_rel_error.value_or(std::numeric_limits<double>::infinity()));
  }
  std::nth_element(e.begin(), e.begin() + trials / 2, e.end());
  return e[trials / 2];
}

TEST(LearnTest, MaxRelErrorDefinition) {
  const std::vector<double> a{0.5, 0.5}, b{0.25, 0.75};
  EXPECT_NEAR(max_rel_error({0.55, 0.5}, {0.25, 0.75}, a, b, false), 0.1, 1e-15);
  EXPECT_NEAR(max_rel_error({0.5, 0.5}, {0.3, 0.75}, a, b, false), 0.2, 1e-15);
  // Swapped components are only forgiven with allow_swap.
  EXPECT_GT(max_rel_error(b, a, a, b, false), 0.5);
  EXPECT_DOUBLE_EQ(max_rel_error(b, a, a, b, true), 0.0);
}

TEST(LearnTest, DefaultSamples) {
  EXPECT_EQ(default_samples(6, 0.05), 691200);
  EXPECT_THROW(default_samples(6, 0.5), ParameterError);
}

TEST(LearnTest, OracleRoundTrip) {
  for (int n : {4, 5, 6, 8}) {
    for (double lambda : {0.5, 1.0, 2.0}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const MixtureModel m = random_instance(n, lambda, 1000 * n + seed);
        const LearnReport r = learn_from_oracle(m);
        ASSERT_TRUE(r.ok()) << "n " << n << " seed " << seed;
        EXPECT_LE(*r.max_rel_error, 1e-8);
        EXPECT_EQ(r.queries - 3 * n, query_offset(4));
        EXPECT_TRUE(r.has(status::kOk));
      }
    }
  }
}

TEST(LearnTest, QueryTallyParts) {
  const LearnReport r = learn_from_oracle(random_instance(7, 2, 1));
  EXPECT_EQ(r.block_queries, 11);
  EXPECT_EQ(r.extension_queries, 3 * (7 - 4) + 3);
  EXPECT_EQ(r.queries, r.block_queries + r.extension_queries);
  // Block, [n], [n]\{1} and [n]\{j} for j = 2..n.
  EXPECT_EQ(r.distinct_slates, 11 + 2 + 6);
  EXPECT_EQ(query_offset(4), 2);
}

TEST(LearnTest, BlockCoversEverythingWhenNEqualsK) {
  const MixtureModel m = random_instance(4, 2, 3);
  const LearnReport r = learn_from_oracle(m);
  EXPECT_EQ(r.extension_queries, 3);
  EXPECT_EQ(r.queries, 3 * 4 + query_offset(4));
  EXPECT_EQ(r.distinct_slates, 11);
  EXPECT_DOUBLE_EQ(r.normalization, 1.0);
  EXPECT_LE(*r.max_rel_error, 1e-8);
}

TEST(LearnTest, SmallBlockWarnsAndViolatesOnWitness) {
  const auto w = find_nonidentifiable_3item(2, 1);
  ASSERT_TRUE(w.has_value());
  LearnConfig cfg;
  cfg.k = 3;
  const LearnReport r = learn_from_oracle(*w, cfg);
  EXPECT_TRUE(r.has(status::kSmallK));
  EXPECT_TRUE(r.has(status::kKViolation));
  EXPECT_FALSE(r.ok());
}

TEST(LearnTest, InvalidBlockSize) {
  LearnConfig cfg;
  cfg.k = 6;
  EXPECT_THROW(learn_from_oracle(random_instance(5, 2, 1), cfg), ParameterError);
}

TEST(LearnTest, InconsistentOracleIsReported) {
  // Rows drawn from two different models cannot come from one mixture.
  const MixtureModel x = random_instance(4, 2, 1), y = random_instance(4, 2, 2);
  OracleTable t = oracle_table(x, all_slates(4));
  t.set({0, 1}, scaled_choice(y, {0, 1}));
  t.set({1, 2, 3}, scaled_choice(y, {1, 2, 3}));
  TableOracle oracle(t);
  const LearnReport r = learn_from_oracle(oracle);
  EXPECT_FALSE(r.ok());
}

TEST(LearnTest, SamplesWithLargeNAreAccurate) {
  const MixtureModel m = geometric_instance(5, 2, 4);
  LearnConfig cfg;
  cfg.samples_per_slate = 50000000;
  cfg.seed = 4;
  const LearnReport r = learn_from_samples(m, cfg);
  ASSERT_TRUE(r.ok());
  EXPECT_LE(*r.max_rel_error, 0.02);
  EXPECT_EQ(r.samples, r.samples_per_slate * r.distinct_slates);
}

TEST(LearnTest, SamplesAreDeterministicGivenSeed) {
  const MixtureModel m = geometric_instance(6, 2, 8);
  LearnConfig cfg;
  cfg.seed = 9;
  const LearnReport x = learn_from_samples(m, cfg), y = learn_from_samples(m, cfg);
  EXPECT_EQ(x.a_hat, y.a_hat);
  EXPECT_EQ(x.b_hat, y.b_hat);
  EXPECT_EQ(x.samples_per_slate, 691200);
}

TEST(LearnTest, NormalizationRootsSolveTheSumConstraint) {
  const MixtureModel m = random_instance(6, 2, 5);
  const Slate full = full_slate(6);
  const double c0 = scaled_choice(m, full)[0];
  // Block weights known up to scale: b_rel = b / sum_{i<4} b_i.
  const double block = m.b[0] + m.b[1] + m.b[2] + m.b[3];
  std::vector<PartnerMap<double>> tail;
  for (int j = 4; j < 6; ++j) {
    const double cj = scaled_choice(m, full)[j];
    const auto drop0 = slate_without(full, 0);
    const double dj = scaled_choice(m, drop0)[slate_position(drop0, j)];
    tail.push_back(partner_map(m.lambda, c0, cj, dj));
  }
  const auto roots = normalization_roots(m.b[0] / block, tail);
  bool found = false;
  for (double s : roots) found |= std::abs(s - block) < 1e-9;
  EXPECT_TRUE(found);
  EXPECT_DOUBLE_EQ(solve_normalization(0.3, {}), 1.0);
}

TEST(LearnTest, LeastSquaresRefinementRecoversModel) {
  const MixtureModel m = random_instance(4, 2, 6);
  std::vector<std::pair<Slate, std::vector<double>>> rows;
  for (const Slate& s : all_slates(4)) rows.emplace_back(s, scaled_choice(m, s));
  std::vector<double> a = m.a, b = m.b;
  for (double& v : a) v *= 1.05;
  for (double& v : b) v *= 0.95;
  a[0] += 0.02;
  refine_least_squares(rows, m.lambda, a, b);
  EXPECT_LE(max_rel_error(a, b, m.a, m.b, false), 1e-6);
}

TEST(LearnTest, CloseRootPairStillRecovered) {
  const MixtureModel m = close_root_block();
  const LearnReport r = learn_from_oracle(m);
  ASSERT_TRUE(r.ok());
  EXPECT_LE(*r.max_rel_error, 1e-8);
}

TEST(LearnTest, DoublingSamplesShrinksErrorByRootTwo) {
  const MixtureModel m = geometric_instance(6, 2, 8);
  const double ratio = median_sample_error(m, 800000, 50) / median_sample_error(m, 400000, 50);
  EXPECT_GE(ratio, 0.6);
  EXPECT_LE(ratio, 0.85);
}

TEST(LearnTest, MedianErrorNonIncreasingInSamples) {
  const MixtureModel m = geometric_instance(6, 2, 8);
  double prev = std::numeric_limits<double>::infinity();
  for (std::int64_t N : {100000, 200000, 400000, 800000}) {
    const double e = median_sample_error(m, N, 50);
    EXPECT_LE(e, prev) << "N=" << N;
    prev = e;
  }
}

}  // namespace
}  // namespace mnlmix
