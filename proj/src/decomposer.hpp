#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "common.hpp"
#include "numerics.hpp"
#include "rng.hpp"

namespace mdhp::decomposer {

/// Constant-modulus RF factor stored as phases; entries are only ever
/// realized as modulus * exp(j*phase), so the amplitude constraint holds by
/// construction. Phases are kept wrapped to [0, 2pi).
struct PhaseMatrix {
  RMat phases;
  double modulus = 0.0;

  int rows() const { return static_cast<int>(phases.rows()); }
  int cols() const { return static_cast<int>(phases.cols()); }
  CMat realize() const;
};

enum class ThresholdMode { kConstant, kAdaptive };

struct DecompositionSettings {
  double convergence_tol = 1e-5;      // epsilon_bar
  double initial_increment = 0.1;     // delta_bar_1
  double growth_factor = 1.25;
  double shrink_factor = 0.8;
  double increment_min = 0.1;
  double increment_max = 0.5;
  double proximity_multiplier = 100.0;
  int max_iterations = 500;
  ThresholdMode threshold_mode = ThresholdMode::kAdaptive;
  bool normalize_output = true;

  void validate() const;
  bool operator==(const DecompositionSettings&) const = default;
};

struct DecompositionTrace {
  int iterations = 0;    // number of RF/baseband update rounds performed
  bool converged = false;
  // error_history[k] is eps_k, with eps_0 recorded before the first round,
  // so its length is iterations + 1. threshold_history[k-1] is the bound
  // used by round k (length iterations).
  std::vector<double> error_history;
  std::vector<double> threshold_history;
  double final_error = 0.0;
};

struct HybridProcessor {
  PhaseMatrix rf;  // N x M
  CMat baseband;   // M x Ns
};

/// Relative Frobenius distance ||target - rf*baseband||_F / ||target||_F.
double error_measure(const CMat& target, const HybridProcessor& hp);

/// SVD-seeded starting point: the first Ns columns carry the phases of
/// U_F * Sigma_F at fixed amplitude, the remaining m - Ns columns get
/// uniform random phases (drawn column-major).
PhaseMatrix init_rf(const CMat& target, int m, double modulus, Rng& rng);

/// Closed-form baseband factor (F_R^H F_R)^-1 F_R^H target.
CMat baseband_update(const PhaseMatrix& rf, const CMat& target);

/// One RF sweep: per row, solve the box-constrained least-squares problem in
/// the phase increments (linearized around the current phases) and apply the
/// increments exactly via modulus * exp(j*(phi + delta)).
PhaseMatrix rf_update(const PhaseMatrix& rf, const CMat& fb, const CMat& target, double bound);

/// Threshold schedule: grow when the last two errors are still far apart and
/// decreasing, shrink otherwise; clamped to [increment_min, increment_max].
double adapt_threshold(double eps_prev, double eps_prev2, double delta_prev,
                       const DecompositionSettings& s);

using IterationObserver =
    std::function<void(int iteration, const PhaseMatrix& before, const PhaseMatrix& after)>;

/// Alternating optimization: init_rf, then rounds of rf_update/baseband_update
/// until |eps_k - eps_{k-1}| <= convergence_tol or max_iterations. When
/// normalize_output is set the baseband factor is scaled so that
/// ||rf*baseband||_F^2 equals the target column count.
std::pair<HybridProcessor, DecompositionTrace> decompose(const CMat& target, int m, double modulus,
                                                         const DecompositionSettings& s, Rng& rng,
                                                         const IterationObserver& observer = {});

/// Waterfilling variant: decomposes the non-zero columns, then appends
/// zero baseband columns so the rebuilt product is [F', 0].
HybridProcessor decompose_waterfilled(const CMat& target_nonzero, int zero_cols, int m,
                                      double modulus, const DecompositionSettings& s, Rng& rng);

/// Rounds each phase to the nearest point of the 2^l_bits grid in circular
/// distance; per-entry error is at most pi / 2^l_bits.
PhaseMatrix quantize_phases(const PhaseMatrix& rf, int l_bits);

}  // namespace mdhp::decomposer
