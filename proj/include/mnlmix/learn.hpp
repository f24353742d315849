#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mnlmix/choice_model.hpp"
#include "mnlmix/config.hpp"
#include "mnlmix/reduction.hpp"

namespace mnlmix {

struct LearnConfig {
  int k = 4;
  double eps = 0.05;
  std::int64_t samples_per_slate = 0;  // 0 selects ceil(8 n^3 / eps^2)
  std::uint64_t seed = 0;
  // Regularity band c/|S| <= P <= C/|S| on the n-slate. C > 1 is allowed
  // because probabilities on a slate sum to one.
  double c_low = 0.5;
  double c_high = 2.0;
  // Two |imag| values closer than selection_tol * (1 + |imag|) are ambiguous.
  double selection_tol = 1e-3;
  // Least-squares refinement over the queried slates (sample mode).
  bool refine = true;
  Tolerances tol;
};

namespace status {
inline constexpr const char* kOk = "ok";
inline constexpr const char* kKViolation = "k-identifiability-violation";
inline constexpr const char* kOracleInconsistent = "oracle-inconsistent";
inline constexpr const char* kDegenerateInstance = "degenerate-instance";
inline constexpr const char* kTooNoisy = "sampling-too-noisy";
inline constexpr const char* kAmbiguous = "ambiguous-root";
inline constexpr const char* kNormalizationCheck = "normalization-check-failed";
inline constexpr const char* kSmallK = "k3-warning";
inline constexpr const char* kIrregular = "regularity-warning";
}  // namespace status

struct LearnReport {
  std::vector<double> a_hat;
  std::vector<double> b_hat;
  // 2^k - k - 1 block slates, 3 per item beyond the block, 1 per block (n-1)-slate
  int queries = 0;
  int block_queries = 0;
  int extension_queries = 0;
  int distinct_slates = 0;  // slates actually requested from the oracle
  std::int64_t samples = 0;
  std::int64_t samples_per_slate = 0;
  std::optional<double> max_rel_error;
  double normalization = 1;  // recovered sum of b over the block
  std::vector<std::string> status;

  // False when a fatal status is present (warnings do not count).
  bool ok() const;
  bool has(const std::string& code) const;
};

// max_i |a^_i - a_i| / a_i + |b^_i - b_i| / b_i; with allow_swap the smaller of
// the direct and swapped comparisons.
double max_rel_error(const std::vector<double>& a_hat, const std::vector<double>& b_hat,
                     const std::vector<double>& a, const std::vector<double>& b, bool allow_swap);

// Constant Q0 in queries = 3n + Q0 for block size k and n >= k.
int query_offset(int k);

LearnReport learn_from_oracle(SlateOracle& oracle, const LearnConfig& cfg = {});
LearnReport learn_from_oracle(const MixtureModel& model, const LearnConfig& cfg = {});

// Samples N per queried slate from the model, then runs the oracle pipeline on
// the empirical values with the closest-to-real root rule.
LearnReport learn_from_samples(const MixtureModel& model, const LearnConfig& cfg = {});

// The sample-mode pipeline (closest-to-real root rule, least-squares
// refinement) on any oracle of estimated values.
LearnReport learn_from_estimates(SlateOracle& oracle, const LearnConfig& cfg = {});

std::int64_t default_samples(int n, double eps);

// Solves s + sum_j f_j(b1_rel * s) = 1 with f_j = N_j / D sharing D.
// Returns the admissible roots in (0, 1]: every f_j(b1_rel s) in (0, 1).
std::vector<double> normalization_roots(double b1_rel, const std::vector<PartnerMap<double>>& tail,
                                        double tau_den = 1e-9);

// Picks the admissible root with the smallest residual(s); s = 1 for an empty
// tail. Falls back to bracketing + bisection if the cleared polynomial has no
// admissible root. Throws DegenerateInstanceError when nothing is admissible.
double solve_normalization(double b1_rel, const std::vector<PartnerMap<double>>& tail,
                           const std::function<double(double)>& residual = {});

// Least-squares fit of (a, b) to the given slate rows (log-weights, softmax).
void refine_least_squares(const std::vector<std::pair<Slate, std::vector<double>>>& rows, double lambda,
                          std::vector<double>& a, std::vector<double>& b);

}  // namespace mnlmix
