#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnlmix/choice_model.hpp"
#include "mnlmix/identify.hpp"
#include "mnlmix/learn.hpp"

namespace mnlmix {

// The two-solution pair instance: lambda = 2, a = (2/5,2/5,1/10,1/10),
// b = (3/10,3/10,1/5,1/5).
RationalMixtureModel counterexample_model();

// Inputs (a1, a2, b1, b2) and lambda of the three-real-roots instance. The third
// coordinates are taken as 1 - (sum); b1 + b2 slightly exceeds one.
struct ThreeRootsInstance {
  double lambda = 5;
  std::array<double, 4> point{0.0389099, 0.000870832, 0.0565171, 0.943483};
  std::array<double, 3> expected_roots{0.043916, 0.164599, 0.281671};
};
ThreeRootsInstance three_roots_instance();

// Formal 3-item oracle for (a1, a2, b1, b2): third coordinates are 1 - sum.
OracleTable formal_three_item_oracle(double lambda, const std::array<double, 4>& point);

// Q_12 of the formal 3-item instance (P_12 deflated at b1).
Polynomial<double> q12_cubic(double lambda, const std::array<double, 4>& point);

// Discriminant of Q_12 after scaling to unit sup-norm; NaN if Q_12 degenerates.
double q12_discriminant(double lambda, const std::array<double, 4>& point);

// The three-roots instance in double and in exact rationals (inputs read as
// the decimal strings above).
struct ThreeRootsReport {
  double lambda = 5;
  std::array<double, 4> point{};
  std::vector<double> cubic;        // ascending coefficients, double mode
  std::vector<double> real_roots;   // double mode, ascending
  double discriminant = 0;          // double mode, unit-scaled cubic
  int exact_real_roots = -1;        // Sturm count on the exact cubic; -1 if not run
  int exact_discriminant_sign = 0;  // sign of the exact discriminant
  bool consistent = false;          // both modes agree on three real roots
};
ThreeRootsReport run_three_roots(bool exact);

// solve_pair_system on the counterexample with the pair slate, in both modes.
struct CounterexampleReport {
  std::vector<CandidateSolution<double>> double_candidates;
  std::vector<CandidateSolution<Rational>> exact_candidates;  // empty unless exact
  double max_mode_gap = 0;  // max |double - exact| over matched candidates
  bool consistent = false;  // same count, matched within 1e-9
  IdentifiabilityReport identify;
};
CounterexampleReport run_counterexample(bool exact);

struct DiscriminantMaxReport {
  double lambda = 2;
  double best = 0;
  std::array<double, 4> argmax{};
  std::vector<double> restart_values;
  std::vector<double> start_values;  // value at each extra start, before projection
  int evaluations = 0;
};

// Multistart compass search over a1, a2, b1, b2 > 0, a1 + a2 < 1, b1 + b2 < 1
// (points are projected back into the domain with a small margin).
DiscriminantMaxReport experiment_discriminant_max(double lambda, int restarts, std::uint64_t seed,
                                                  const std::vector<std::array<double, 4>>& extra_starts = {},
                                                  int jobs = 1);

// Maximized discriminants within this band count as sign 0: the maximizer
// approaches double roots, where the value is zero up to rounding.
inline constexpr double kSignTolerance = 1e-12;

struct LambdaThresholdReport {
  std::vector<double> lambdas;
  std::vector<double> best_values;
  std::vector<int> signs;  // -1, 0, +1 with kSignTolerance
  // Bracket [lo, hi] of the first change from sign <= 0 to sign +1, if any.
  std::optional<std::pair<double, double>> bracket;
};

LambdaThresholdReport experiment_lambda_threshold(const std::vector<double>& grid, int restarts,
                                                  std::uint64_t seed, int refine_steps = 0, int jobs = 1);

struct SweepReport {
  int n = 4;
  double lambda = 2;
  int trials = 0;
  int unique = 0;
  int non_unique_full = 0;
  int non_unique_pair = 0;
  int collapse = 0;
  std::vector<double> min_gates;  // min cross gate per trial, ordered by seed
  std::vector<std::uint64_t> non_unique_seeds;
  std::vector<MixtureModel> counterexamples;
};

SweepReport experiment_identifiability_sweep(int n, double lambda, int trials, std::uint64_t seed, int jobs = 1);

struct SampleComplexityRow {
  double eps = 0;
  std::optional<std::int64_t> n_star;
};

struct SampleComplexityReport {
  int n = 6;
  double lambda = 2;
  int trials = 50;
  std::vector<std::int64_t> grid;
  std::vector<std::vector<double>> errors;  // per grid point, per trial
  std::vector<SampleComplexityRow> rows;
  std::optional<double> slope;              // least-squares slope of log N* vs log(1/eps)
  std::string to_csv() const;
};

// Learner runs on the reference model (geometric_instance with ratio 8) over a
// shared doubling grid N0 * 2^m; N* is the first grid point with >= 90% success.
SampleComplexityReport experiment_sample_complexity(int n, double lambda, const std::vector<double>& eps_grid,
                                                    int trials, std::uint64_t seed, std::int64_t n0 = 10000,
                                                    int grid_points = 10, int jobs = 1);

// Least-squares slope of log y against log x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mnlmix
