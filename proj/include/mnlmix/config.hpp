#pragma once

namespace mnlmix {

// Numeric guards used across the library. One record so callers can tighten
// or loosen everything in one place.
struct Tolerances {
  double imag = 1e-8;       // root counts as real when |Im r| <= imag
  double defl = 1e-6;       // deflation precondition, relative to sup-norm
  double lead = 1e-13;      // leading coefficient trim, relative to sup-norm
  double conj = 1e-8;       // conjugate pairing
  double adm = 1e-9;        // admissibility margin on [0,1]
  double residual = 1e-8;   // equation residual accepted as a solution
  double dedupe = 1e-6;     // max-relative distance merging duplicate solutions
  double polish = 1e-5;     // residual below which a candidate is refit before the residual test
  double den_scale = 1e-9;  // denominator guard is den_scale * (1 + lambda)

  double den(double lambda) const { return den_scale * (1.0 + lambda); }
};

inline constexpr double kWeightFloor = 1e-9;
inline constexpr double kCollapseTol = 1e-9;

}  // namespace mnlmix
