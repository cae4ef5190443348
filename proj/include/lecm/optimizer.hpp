#pragma once

#include "lecm/first_order.hpp"

namespace lecm {

enum class OptimizeDirection { maximize, minimize };

struct OptimizerConfig {
  OptimizeDirection direction = OptimizeDirection::maximize;
  double step_init = 0.01;
  double step_shrink = 0.5;
  double stationarity_tol = 1e-8;
  int max_iters = 10000;
  int reorthonormalize_every = 10;
  bool use_phase_ets = false;  // complex-rotation extension for complex states

  void validate() const;
};

struct OptimizeOutcome {
  MeasurementBasis bsm;
  LocalizationResult localization;
  OptimalityReport report;
  std::vector<double> trajectory;  // accepted averages, starting at the initial basis
  bool stationary = false;
  int iterations = 0;
};

/// Greedy first-order ascent/descent over measurement bases: repeatedly rotates
/// the pair with the largest slope magnitude, backtracking when the realized
/// change disagrees with the prediction. The average entropy is monotone across
/// accepted steps.
OptimizeOutcome optimize_bsm(const StateVector& psi, const Partition& partition,
                             const MeasurementBasis& start, const OptimizerConfig& config = {});

struct OracleResult {
  double best_max = 0.0;
  double best_min = 0.0;
};

/// Extremal averages over uniformly sampled orthonormal bases of the support
/// of the environment density matrix (real-valued sampling for real states).
OracleResult random_bsm_oracle(const StateVector& psi, const Partition& partition,
                               std::int64_t n_trials, std::uint64_t seed);

/// Columns re-orthonormalized by QR with a positive-diagonal convention.
MeasurementBasis reorthonormalize(const MeasurementBasis& bsm);

}  // namespace lecm
