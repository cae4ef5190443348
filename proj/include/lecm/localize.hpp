#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lecm/density.hpp"
#include "lecm/partition.hpp"
#include "lecm/schmidt.hpp"

namespace lecm {

inline constexpr double kProbabilityTol = 1e-12;

/// Orthonormal measurement vectors over the environment space, spanning at
/// least the support of the environment's reduced density matrix.
struct MeasurementBasis {
  Eigen::MatrixXcd vectors;  // env_dim x count
  std::vector<double> labels;  // optional symmetry quantum numbers, one per vector

  int count() const noexcept { return static_cast<int>(vectors.cols()); }
  std::int64_t env_dim() const noexcept { return vectors.rows(); }

  double gram_defect() const;
  void require_orthonormal(double tol = 1e-10) const;
};

/// Measurement branches: probabilities, post-measurement system states as
/// d1 x d2 matrices, their entropies and the average entropy.
struct LocalizationResult {
  Eigen::VectorXd probabilities;
  std::vector<Eigen::MatrixXcd> branches;  // normalized where active
  Eigen::VectorXd entropies;
  std::vector<char> active;  // probability above kProbabilityTol
  double average = 0.0;
  int d1 = 0;
  int d2 = 0;
};

/// Post-measurement decomposition of the state for the given basis. Branches
/// with probability at or below kProbabilityTol are retained, flagged inactive
/// and assigned zero entropy.
LocalizationResult localize(const StateVector& psi, const Partition& partition,
                            const MeasurementBasis& bsm);

}  // namespace lecm
