#include <gtest/gtest.h>

#include <algorithm>
#include <complex>

#include "mnlmix/errors.hpp"
#include "mnlmix/polyalg.hpp"
#include "mnlmix/rng.hpp"

namespace mnlmix {
namespace {

using P = Polynomial<double>;
using PQ = Polynomial<Rational>;

void expect_real_roots(const RootSet& rs, std::vector<double> want, double tol) {
  std::vector<double> got = rs.real_roots();
  std::sort(want.begin(), want.end());
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol);
}

TEST(PolyalgTest, Quadratic) {
  expect_real_roots(solve_quadratic(from_roots<double>({2, -5})), {2, -5}, 1e-13);
  const RootSet c = solve_quadratic(P{2, 2, 1});  // roots -1 +- i
  EXPECT_EQ(c.size(), 2);
  EXPECT_TRUE(c.real_roots().empty());
  for (const auto& r : c.roots) {
    EXPECT_NEAR(r.real(), -1, 1e-14);
    EXPECT_NEAR(std::abs(r.imag()), 1, 1e-14);
  }
}

TEST(PolyalgTest, CubicThreeRealRoots) {
  expect_real_roots(solve_cubic(from_roots<double>({0.1, 0.2, 0.7}, -3)), {0.1, 0.2, 0.7}, 1e-12);
}

TEST(PolyalgTest, CubicOneRealRoot) {
  const P p = P{1, 0, 1} * P{-0.3, 1};
  expect_real_roots(solve_cubic(p), {0.3}, 1e-13);
}

TEST(PolyalgTest, CubicTripleRoot) {
  const RootSet rs = solve_cubic(from_roots<double>({0.5, 0.5, 0.5}));
  for (const auto& r : rs.roots) EXPECT_NEAR(r.real(), 0.5, 1e-4);
}

TEST(PolyalgTest, QuarticFourRealRoots) {
  expect_real_roots(solve_quartic(from_roots<double>({-1, 0.25, 0.5, 3}, 0.5)), {-1, 0.25, 0.5, 3}, 1e-11);
}

TEST(PolyalgTest, QuarticMixedRoots) {
  const P p = P{1, 0, 1} * from_roots<double>({0.2, 0.9});
  expect_real_roots(solve_quartic(p), {0.2, 0.9}, 1e-12);
}

TEST(PolyalgTest, QuarticBiquadratic) {
  // x^4 - 5x^2 + 4 = (x^2 - 1)(x^2 - 4)
  expect_real_roots(solve_quartic(P{4, 0, -5, 0, 1}), {-2, -1, 1, 2}, 1e-13);
}

TEST(PolyalgTest, QuarticNoRealRoots) {
  const P p = P{1, 0, 1} * P{4, 0, 1};
  EXPECT_TRUE(solve_quartic(p).real_roots().empty());
  EXPECT_EQ(solve_quartic(p).size(), 4);
}

TEST(PolyalgTest, SolvePolynomialDispatch) {
  EXPECT_EQ(solve_polynomial(P{3}).size(), 0);
  expect_real_roots(solve_polynomial(P{-1, 2}), {0.5}, 0);
  // Tiny leading term is trimmed, leaving the quadratic.
  expect_real_roots(solve_polynomial(P{-2, 1, 1, 1e-17}), {-2, 1}, 1e-12);
  EXPECT_THROW(solve_polynomial(P{}), ShapeError);
  EXPECT_THROW(solve_cubic(P{1, 1}), ShapeError);
}

TEST(PolyalgTest, RandomRootsRecovered) {
  Rng rng(123);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> roots;
    for (int i = 0; i < 4; ++i) roots.push_back(4 * rng.uniform() - 2);
    std::sort(roots.begin(), roots.end());
    bool separated = true;
    for (int i = 0; i + 1 < 4; ++i) separated = separated && roots[i + 1] - roots[i] > 1e-2;
    if (!separated) continue;
    const P p = from_roots(roots, rng.uniform() + 0.5);
    const RootSet rs = solve_quartic(p);
    for (const auto& r : rs.roots) EXPECT_LE(scaled_residual(p, r), 1e-12);
    expect_real_roots(rs, roots, 1e-8);
  }
}

TEST(PolyalgTest, CubicDiscriminantMatchesRootProduct) {
  const std::vector<double> r{0.3, -1.1, 2.0};
  const double lead = 1.5;
  double prod = std::pow(lead, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) prod *= (r[i] - r[j]) * (r[i] - r[j]);
  EXPECT_NEAR(cubic_discriminant(from_roots(r, lead)), prod, 1e-12);
  EXPECT_LT(cubic_discriminant(P{1, 0, 1} * P{-1, 1}), 0);
  EXPECT_EQ(cubic_discriminant(from_roots<Rational>({1, 1, 2})), 0);
}

TEST(PolyalgTest, DeflateRoot) {
  const PQ p = from_roots<Rational>({Rational(1, 3), 2, -1});
  EXPECT_EQ(deflate_root(p, Rational(1, 3), 0), from_roots<Rational>({2, -1}));
  EXPECT_THROW(deflate_root(p, Rational(1, 2), 0), NotARootError);
  EXPECT_THROW(deflate_root(P{-1, 0, 1}, 0.5), NotARootError);
}

TEST(PolyalgTest, ResultantMatchesRootFormula) {
  // Res(p, q) = lc(p)^deg q * prod q(r_i) over the roots r_i of p.
  const std::vector<Rational> rp{1, Rational(-1, 2), 3};
  const PQ p = from_roots(rp, Rational(2));
  const PQ q{Rational(1), Rational(-2), Rational(0), Rational(5)};
  Rational want = Rational(2) * Rational(2) * Rational(2);
  for (const Rational& r : rp) want *= q(r);
  EXPECT_EQ(sylvester_resultant(p, q), want);
  EXPECT_NEAR(sylvester_resultant(to_double(p), to_double(q)), to_double(want), 1e-9 * std::abs(to_double(want)));
  EXPECT_EQ(sylvester_resultant(p, from_roots<Rational>({3, 7})), 0);
}

TEST(PolyalgTest, SturmCountsDistinctRoots) {
  const PQ p = from_roots<Rational>({Rational(1, 10), Rational(1, 2), Rational(1, 2), Rational(9, 10)});
  EXPECT_EQ(count_real_roots_sturm(p, Rational(0), Rational(1)), 3);
  EXPECT_EQ(count_real_roots_sturm(p, Rational(0), Rational(1, 2)), 2);
  EXPECT_EQ(count_real_roots_sturm(p, Rational(1, 2), Rational(1)), 1);
  EXPECT_EQ(count_real_roots_sturm(P{1, 0, 1}, -10, 10), 0);
  EXPECT_EQ(count_real_roots_sturm(from_roots<double>({-0.5, 0.25}), -1, 1), 2);
}

TEST(PolyalgTest, RationalRoots) {
  const PQ p = PQ{1, 0, 1} * from_roots<Rational>({Rational(5, 19), Rational(2, 5)});
  const auto rr = rational_roots(p);
  ASSERT_EQ(rr.size(), 2u);
  EXPECT_TRUE(std::find(rr.begin(), rr.end(), Rational(5, 19)) != rr.end());
  EXPECT_TRUE(std::find(rr.begin(), rr.end(), Rational(2, 5)) != rr.end());
  EXPECT_TRUE(rational_roots(PQ{-2, 0, 1}).empty());
}

TEST(PolyalgTest, RootSetHelpers) {
  const RootSet rs = solve_cubic(from_roots<double>({0.1, 0.5, 2}));
  EXPECT_EQ(rs.count_real_in(0, 1), 2);
  EXPECT_EQ(rs.count_real_in(0.6, 3), 1);
}

}  // namespace
}  // namespace mnlmix
