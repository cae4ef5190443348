#pragma once

#include <Eigen/Dense>

#include "lecm/state.hpp"

namespace lecm {

/// Hermitian, unit-trace, positive semidefinite matrix (within tolerances).
struct DensityMatrix {
  Eigen::MatrixXcd m;

  int dim() const noexcept { return static_cast<int>(m.rows()); }
  void validate(double tol = 1e-8) const;
};

/// Partial trace of |psi><psi| keeping the listed sites. Bit t of the row/column
/// index is the t-th listed site.
DensityMatrix reduced_density_matrix(const StateVector& psi, const std::vector<int>& keep_sites);

/// -sum lambda log2 lambda over the spectrum, 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy of a normalized pure state reshaped as a d1 x d2 matrix, from its
/// squared singular values.
double branch_entropy(const Eigen::MatrixXcd& branch);

/// Tr(delta log2 rho) evaluated on the support of rho. The block of delta on
/// the kernel of rho must vanish (within kernel_tol), otherwise the limit the
/// expression stands for does not exist and an ill_defined_limit error is thrown.
double support_trace_log(const Eigen::MatrixXcd& delta, const DensityMatrix& rho,
                         double kernel_tol = 1e-8);

}  // namespace lecm
