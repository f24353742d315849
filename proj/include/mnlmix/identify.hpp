#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnlmix/choice_model.hpp"
#include "mnlmix/config.hpp"
#include "mnlmix/reduction.hpp"

namespace mnlmix {

// A weight assignment on `items` (pair level: two items; full: the universe).
template <class T>
struct CandidateSolution {
  std::vector<int> items;
  std::vector<T> a;
  std::vector<T> b;
  double residual = 0;        // max |violation| over the checked equations
  bool admissible = false;    // entries in [-tau_adm, 1 + tau_adm]
  bool degenerate = false;    // came from the pinned-denominator branch
  bool exact_root = false;    // rational mode: root confirmed by substitution
};

// Max over the pair-system equations (four, five with the pair slate).
template <class T>
double pair_system_residual(const PairSystemInput<T>& s, const PairTuple<T>& t);

// Real quartic roots in (-tau_adm, 1 + tau_adm), back-substituted, plus the
// degenerate branch b_i = full_i / (1 + lambda). Near-duplicates are merged.
template <class T>
std::vector<CandidateSolution<T>> solve_pair_system(const PairSystemInput<T>& s, const Tolerances& tol = {});

template <class T>
struct ThreeItemResult {
  std::vector<CandidateSolution<T>> solutions;  // admissible with residual <= tol.residual
  std::vector<CandidateSolution<T>> rejected;   // everything else that was examined
  bool continuum = false;                       // the quartic vanished identically
};

// Needs {1,2},{1,3},{2,3},{1,2,3} (0-based {0,1},...). Residuals use all four slates.
template <class T>
ThreeItemResult<T> solve_3item(const BasicOracleTable<T>& oracle, const Tolerances& tol = {});

// Extends a b_1 value to all items through the (1, j) systems (systems[j] for
// j >= 1, universe [n]). Pinned denominators branch into every combination of
// degenerate candidates.
// Close root pairs cost about half the digits of b_1. A candidate with positive
// entries and tol.residual < residual <= tol.polish is refit to the table by
// least squares and its residual recomputed.
void polish_candidate(const OracleTable& oracle, CandidateSolution<double>& c, const Tolerances& tol);

std::vector<CandidateSolution<double>> extend_from_b1(double x, const std::vector<PairSystemInput<double>>& systems,
                                                      const Tolerances& tol = {});

// Max residual of (a, b) against every slate in the table.
template <class T>
double table_residual(const BasicOracleTable<T>& oracle, const std::vector<T>& a, const std::vector<T>& b);

enum class GateKind { kCross, kPairSlate };

struct GateValue {
  GateKind kind = GateKind::kCross;
  int j = 0;  // 0-based
  int k = 0;  // cross gates only
  double value = 0;
};

struct IdentifyOptions {
  Tolerances tol;
  // Slate budget for n > 4: n-slate, (n-1)-slates and 2-slates. n <= 4 uses all.
  bool all_slates_up_to_4 = true;
};

struct IdentifiabilityReport {
  bool unique = false;
  bool pair_level_unique = true;
  bool collapse = false;
  bool swap_note = false;
  std::vector<CandidateSolution<double>> solutions;       // full-system classes
  std::vector<CandidateSolution<double>> pair_solutions;  // admissible pair-level candidates
  std::vector<GateValue> gates;
  std::vector<std::string> codes;

  double min_cross_gate() const;
  double min_pair_gate() const;
  // 0 unique, 2 non-unique (full or pair level), 3 collapse.
  int exit_code() const;
};

IdentifiabilityReport check_identifiability(const MixtureModel& model, const IdentifyOptions& opts = {});

// Exact-mode twin for n = 3 and pair-level checks on rational models.
IdentifiabilityReport check_identifiability(const RationalMixtureModel& model, const IdentifyOptions& opts = {});

// Max-relative distance between two candidates on the same items.
template <class T>
double candidate_distance(const CandidateSolution<T>& x, const CandidateSolution<T>& y);

// Searches for a 3-item model with two admissible solutions by locating a sign
// change of the cross gate along a ray in b and bisecting on it. Returns
// nullopt when no witness turns up within max_tries rays.
std::optional<MixtureModel> find_nonidentifiable_3item(double lambda, std::uint64_t seed, int max_tries = 400);

}  // namespace mnlmix
