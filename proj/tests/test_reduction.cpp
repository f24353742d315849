#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mnlmix/experiments.hpp"
#include "mnlmix/reduction.hpp"

namespace mnlmix {
namespace {

// The four pair-system equations written out directly from the slate formulas.
double system_residual(const PairSystemInput<double>& s, double ai, double aj, double bi, double bj) {
  const double l = s.lambda;
  return std::max({std::abs(ai + l * bi - s.full_i), std::abs(aj + l * bj - s.full_j),
                   std::abs(ai / (1 - aj) + l * bi / (1 - bj) - s.drop_j_i),
                   std::abs(aj / (1 - ai) + l * bj / (1 - bi) - s.drop_i_j)});
}

TEST(ReductionTest, InputFromModelMatchesSlateFormulas) {
  const MixtureModel m = random_instance(5, 2, 1);
  const auto s = pair_system_input(m, full_slate(5), 0, 3, true);
  EXPECT_DOUBLE_EQ(s.full_i, m.a[0] + 2 * m.b[0]);
  EXPECT_NEAR(s.drop_j_i, m.a[0] / (1 - m.a[3]) + 2 * m.b[0] / (1 - m.b[3]), 1e-15);
  EXPECT_NEAR(*s.pair_i, m.a[0] / (m.a[0] + m.a[3]) + 2 * m.b[0] / (m.b[0] + m.b[3]), 1e-15);
}

TEST(ReductionTest, PartnerMapRecoversTruePartner) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MixtureModel m = random_instance(4, 1.5, seed);
    const auto s = pair_system_input(m, full_slate(4), 0, 2, false);
    const auto bj = partner_map(s)(m.b[0], 1e-12);
    ASSERT_TRUE(bj.has_value());
    EXPECT_NEAR(*bj, m.b[2], 1e-10);
    const auto t = BackSubstitution<double>::from(s).evaluate(m.b[0], 1e-12);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(t->a_i, m.a[0], 1e-12);
    EXPECT_NEAR(t->a_j, m.a[2], 1e-10);
  }
}

TEST(ReductionTest, PartnerMapPoleIsDegenerateBranch) {
  const MixtureModel m = random_instance(4, 2, 3);
  const auto s = pair_system_input(m, full_slate(4), 0, 1, false);
  EXPECT_FALSE(partner_map(s)(s.full_i / 3, 1e-9).has_value());
}

TEST(ReductionTest, ThreeItemBackSubstitution) {
  const MixtureModel m = random_instance(3, 0.7, 2);
  const auto c123 = scaled_choice(m, full_slate(3));
  const auto c23 = scaled_choice(m, {1, 2});
  const auto t = back_substitute(m.b[0], m.b[1], c123, m.lambda);
  EXPECT_NEAR(t.a1, m.a[0], 1e-14);
  EXPECT_NEAR(t.a3, m.a[2], 1e-14);
  EXPECT_NEAR(t.b3, m.b[2], 1e-14);
  // b2 from b1 through the {2,3} slate: the (1,2) system of the universe {1,2,3}.
  const auto b2 = b2_of_b1(m.b[0], c23[0], c123[0], c123[1], m.lambda, 1e-12);
  ASSERT_TRUE(b2.has_value());
  EXPECT_NEAR(*b2, m.b[1], 1e-10);
}

TEST(ReductionTest, InterpolatedQuarticMatchesExpansionExactly) {
  const RationalMixtureModel m = counterexample_model();
  for (int j = 1; j < 4; ++j) {
    const auto s = pair_system_input(m, full_slate(4), 0, j, true);
    EXPECT_EQ(build_quartic_P(s), expand_quartic_P(s));
    EXPECT_EQ(build_quartic_P_tilde(s), expand_quartic_P_tilde(s));
    EXPECT_EQ(cleared_P(s, m.b[0]), Rational(0));
    EXPECT_EQ(cleared_P_tilde(s, m.b[0]), Rational(0));
  }
}

TEST(ReductionTest, CounterexampleQuarticCoefficients) {
  const auto s = pair_system_input(counterexample_model(), full_slate(4), 0, 1, false);
  const Polynomial<Rational> want{Rational(22, 21), Rational(-260, 21), Rational(509690, 9261),
                                  Rational(-1010476, 9261), Rational(753920, 9261)};
  EXPECT_EQ(build_quartic_P(s), want);
}

TEST(ReductionTest, InterpolatedQuarticMatchesExpansionInDouble) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const MixtureModel m = random_instance(5, 0.5 + seed % 3, seed);
    const auto s = pair_system_input(m, full_slate(5), 0, 1 + seed % 4, true);
    const auto p = build_quartic_P(s), q = expand_quartic_P(s);
    const double scale = quartic_term_scale(s);
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(p.coeff(k), q.coeff(k), 1e-12 * scale);
    EXPECT_LE(std::abs(p(m.b[0])), 1e-12 * scale);
    EXPECT_LE(std::abs(build_quartic_P_tilde(s)(m.b[0])), 1e-12 * scale);
  }
}

// Brute force: sign changes of the cleared expression on a fine grid bracket
// exactly the real roots the closed-form solver reports in (0, 1), and each
// root back-substitutes into a solution of the written-out system.
TEST(ReductionTest, GridOracleAgreesWithQuarticRoots) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const MixtureModel m = random_instance(4, 2, 100 + seed);
    const auto s = pair_system_input(m, full_slate(4), 0, 1, false);
    const auto P = build_quartic_P(s);
    std::vector<double> grid_roots;
    const int steps = 20000;
    double prev = cleared_P(s, 1e-9);
    for (int g = 1; g <= steps; ++g) {
      const double x = static_cast<double>(g) / steps;
      const double cur = cleared_P(s, x);
      if ((prev < 0) != (cur < 0)) grid_roots.push_back(x);
      prev = cur;
    }
    std::vector<double> solved;
    for (double r : solve_polynomial(P).real_roots())
      if (r > 1e-9 && r < 1) solved.push_back(r);
    std::sort(solved.begin(), solved.end());
    bool close_pair = false;
    for (std::size_t i = 0; i + 1 < solved.size(); ++i) close_pair |= solved[i + 1] - solved[i] < 1e-3;
    if (close_pair) continue;
    ++checked;
    ASSERT_EQ(grid_roots.size(), solved.size()) << "seed " << seed;
    for (std::size_t i = 0; i < solved.size(); ++i) EXPECT_NEAR(grid_roots[i], solved[i], 1.0 / steps);
    for (double r : solved) {
      const auto t = BackSubstitution<double>::from(s).evaluate(r, 1e-9);
      if (!t) continue;
      EXPECT_LE(system_residual(s, t->a_i, t->a_j, t->b_i, t->b_j), 1e-8) << "seed " << seed << " root " << r;
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(ReductionTest, DeflatedCubicAtTrueRoot) {
  const MixtureModel m = random_instance(4, 2, 9);
  const auto s = pair_system_input(m, full_slate(4), 0, 1, false);
  const auto q = deflated_cubic(s, m.b[0]);
  EXPECT_EQ(q.degree(), 3);
  const auto p = build_quartic_P(s);
  for (double x : {0.1, 0.4, 0.8}) EXPECT_NEAR(q(x) * (x - m.b[0]), p(x), 1e-10 * p.sup_norm());
  EXPECT_THROW(deflated_cubic(s, m.b[0] + 0.1), NotARootError);
}

TEST(ReductionTest, GateOfIdenticalCubicsVanishes) {
  const MixtureModel m = random_instance(4, 2, 4);
  const auto q = gate_cubic(m, 1);
  EXPECT_NEAR(resultant_gate_W(q, q), 0.0, 1e-12);
  EXPECT_NEAR(resultant_gate_W(q, q * 5.0), 0.0, 1e-12);
}

TEST(ReductionTest, GateMatchesRootFormula) {
  // Unit-scaled resultant equals lc(p)^3 prod q(r_i) for monic-free cubics.
  const Polynomial<double> p = from_roots<double>({0.1, 0.3, 0.6}, 1.0);
  const Polynomial<double> q = from_roots<double>({0.2, 0.5, 0.9}, 1.0);
  const Polynomial<double> pu = p.unit_scaled(), qu = q.unit_scaled();
  double want = std::pow(pu.leading(), 3);
  for (double r : {0.1, 0.3, 0.6}) want *= qu(r);
  EXPECT_NEAR(resultant_gate_W(p, q), want, 1e-15);
  EXPECT_DOUBLE_EQ(resultant_gate_W(Polynomial<double>{2.0}, q), 1.0);
}

TEST(ReductionTest, RnSumsSquaredGates) {
  const MixtureModel m = random_instance(5, 2, 8);
  const double w12 = resultant_gate_W(gate_cubic(m, 1), gate_cubic(m, 2));
  const double w34 = resultant_gate_W(gate_cubic(m, 3), gate_cubic(m, 4));
  EXPECT_DOUBLE_EQ(r_n_value(m, {{1, 2}, {3, 4}}), w12 * w12 + w34 * w34);
  EXPECT_THROW(r_n_value(m, {{0, 2}}), DomainError);
}

}  // namespace
}  // namespace mnlmix
