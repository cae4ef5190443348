#include "lecm/localize.hpp"

namespace lecm {

double MeasurementBasis::gram_defect() const {
  const Eigen::MatrixXcd gram = vectors.adjoint() * vectors;
  return (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

void MeasurementBasis::require_orthonormal(double tol) const {
  if (vectors.size() == 0) fail(Errc::invalid_argument, "measurement basis is empty");
  if (gram_defect() > tol)
    fail(Errc::basis_not_orthonormal, "measurement vectors are not orthonormal");
}

LocalizationResult localize(const StateVector& psi, const Partition& partition,
                            const MeasurementBasis& bsm) {
  partition.validate(psi.n_sites());
  if (bsm.env_dim() != partition.env_dim())
    fail(Errc::invalid_argument, "measurement basis does not match the environment dimension");
  bsm.require_orthonormal();

  const Eigen::MatrixXcd coeff = coefficient_matrix(psi, partition);
  const int d1 = partition.d1();
  const int d2 = partition.d2();
  const int count = bsm.count();

  LocalizationResult result;
  result.d1 = d1;
  result.d2 = d2;
  result.probabilities.resize(count);
  result.entropies.setZero(count);
  result.branches.resize(count);
  result.active.assign(count, 0);

  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXcd w = coeff * bsm.vectors.col(i).conjugate();
    const double p = w.squaredNorm();
    result.probabilities(i) = p;
    total += p;
    if (p > kProbabilityTol) {
      w /= std::sqrt(p);
      result.branches[i] = Eigen::Map<const Eigen::MatrixXcd>(w.data(), d1, d2);
      result.entropies(i) = branch_entropy(result.branches[i]);
      result.active[i] = 1;
    } else {
      result.branches[i] = Eigen::MatrixXcd::Zero(d1, d2);
    }
  }
  if (std::abs(total - 1.0) > 1e-8)
    fail(Errc::support_not_covered,
         "measurement basis does not cover the support of the environment density matrix");

  result.average = result.probabilities.dot(result.entropies);
  return result;
}

}  // namespace lecm
