#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mnlmix/experiments.hpp"

namespace mnlmix {
namespace {

TEST(ExperimentsTest, ThreeRootsCubic) {
  const ThreeRootsInstance inst = three_roots_instance();
  const auto q = q12_cubic(inst.lambda, inst.point);
  ASSERT_EQ(q.degree(), 3);
  const auto roots = solve_polynomial(q).real_roots();
  ASSERT_EQ(roots.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(roots[i], inst.expected_roots[i], 1e-3);
  EXPECT_GT(q12_discriminant(inst.lambda, inst.point), 0);
}

TEST(ExperimentsTest, ThreeRootsExactAndDoubleAgree) {
  const ThreeRootsReport r = run_three_roots(true);
  EXPECT_EQ(r.real_roots.size(), 3u);
  EXPECT_EQ(r.exact_real_roots, 3);
  EXPECT_EQ(r.exact_discriminant_sign, 1);
  EXPECT_TRUE(r.consistent);
}

TEST(ExperimentsTest, CounterexampleReport) {
  const CounterexampleReport r = run_counterexample(true);
  EXPECT_EQ(r.double_candidates.size(), 2u);
  EXPECT_EQ(r.exact_candidates.size(), 2u);
  EXPECT_LE(r.max_mode_gap, 1e-9);
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(r.identify.exit_code(), 2);
}

TEST(ExperimentsTest, DiscriminantMatchesCubicFormula) {
  const std::array<double, 4> p{0.2, 0.3, 0.25, 0.35};
  const auto q = q12_cubic(2, p).unit_scaled();
  EXPECT_DOUBLE_EQ(q12_discriminant(2, p), cubic_discriminant(q));
}

TEST(ExperimentsTest, DiscriminantMaxNegativeAtLambda2) {
  // The maximizer runs into double roots, where the value is zero up to rounding.
  const auto r = experiment_discriminant_max(2, 20, 1);
  EXPECT_LT(r.best, kSignTolerance);
  EXPECT_EQ(r.restart_values.size(), 20u);
  // Deterministic and independent of the worker count.
  const auto r4 = experiment_discriminant_max(2, 20, 1, {}, 4);
  EXPECT_EQ(r.best, r4.best);
  EXPECT_EQ(r.restart_values, r4.restart_values);
}

TEST(ExperimentsTest, DiscriminantMaxWithThreeRootsStartAtLambda5) {
  const ThreeRootsInstance inst = three_roots_instance();
  const auto r = experiment_discriminant_max(5, 2, 1, {inst.point});
  ASSERT_EQ(r.start_values.size(), 1u);
  EXPECT_GT(r.start_values[0], 0);
  EXPECT_GT(r.best, 0);
}

TEST(ExperimentsTest, DiscriminantMaxRejectsZeroRestarts) {
  EXPECT_THROW(experiment_discriminant_max(2, 0, 1), ParameterError);
}

TEST(ExperimentsTest, LambdaThresholdSignPattern) {
  const auto r = experiment_lambda_threshold({2}, 10, 1);
  ASSERT_EQ(r.best_values.size(), 1u);
  EXPECT_LE(r.signs[0], 0);
  EXPECT_FALSE(r.bracket.has_value());
  EXPECT_THROW(experiment_lambda_threshold({5, 2}, 10, 1), ParameterError);
}

TEST(ExperimentsTest, LambdaThresholdBracketsSignChange) {
  const auto r = experiment_lambda_threshold({2, 5}, 100, 1, 3);
  EXPECT_EQ(r.signs[1], 1);
  ASSERT_TRUE(r.bracket.has_value());
  EXPECT_GE(r.bracket->first, 2);
  EXPECT_LE(r.bracket->second, 5);
  EXPECT_NEAR(r.bracket->second - r.bracket->first, 3.0 / 8, 1e-12);
}

TEST(ExperimentsTest, SweepWithZeroTrialsIsEmpty) {
  const auto r = experiment_identifiability_sweep(4, 2, 0, 1);
  EXPECT_EQ(r.trials, 0);
  EXPECT_EQ(r.unique + r.non_unique_full + r.collapse, 0);
}

TEST(ExperimentsTest, SmallSweepCountsAddUp) {
  const auto r = experiment_identifiability_sweep(4, 2, 12, 3, 3);
  EXPECT_EQ(r.unique + r.non_unique_full + r.collapse, 12);
  EXPECT_EQ(r.min_gates.size(), 12u);
  EXPECT_EQ(r.counterexamples.size(), r.non_unique_seeds.size());
}

TEST(ExperimentsTest, FittedSlopeOfPowerLaw) {
  EXPECT_NEAR(fitted_slope({10, 20, 40}, {300, 1200, 4800}), 2.0, 1e-12);
  EXPECT_THROW(fitted_slope({1}, {1}), ParameterError);
}

TEST(ExperimentsTest, SampleComplexitySingleRow) {
  const auto r = experiment_sample_complexity(4, 2, {0.2}, 1, 1, 20000, 3);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_FALSE(r.slope.has_value());
  const std::string csv = r.to_csv();
  EXPECT_EQ(csv.rfind("eps,n_star\n0.2,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

}  // namespace
}  // namespace mnlmix
