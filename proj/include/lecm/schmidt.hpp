#pragma once

#include <Eigen/Dense>

#include "lecm/partition.hpp"
#include "lecm/state.hpp"

namespace lecm {

/// Bi-orthogonal expansion of the state across system | environment. Squared
/// singular values (descending) are the shared spectrum of both reduced
/// density matrices.
struct SchmidtDecomposition {
  Eigen::VectorXd lambdas;       // descending, sums to 1
  Eigen::MatrixXcd sys_vectors;  // system_dim x count, orthonormal columns
  Eigen::MatrixXcd env_vectors;  // env_dim x count, orthonormal columns (may be empty)
  int schmidt_number = 0;        // lambdas above the truncation tolerance
};

/// Coefficient matrix M with psi = sum M(j, e) |j>_S |e>_E, j = a + d1 * b over
/// the partition's listed site order.
Eigen::MatrixXcd coefficient_matrix(const StateVector& psi, const Partition& partition);

SchmidtDecomposition schmidt_decompose(const StateVector& psi, const Partition& partition);

}  // namespace lecm
