#pragma once

#include "lecm/canonical.hpp"
#include "lecm/localize.hpp"

namespace lecm {

/// Small rotation mixing two measurement vectors, leaving the rest fixed.
/// phase = true uses the complex variant |i> + i eps |j>, an extension for
/// complex-valued states.
struct ETStep {
  int i = 0;
  int j = 1;
  double epsilon = 0.0;
  bool phase = false;

  void validate() const;
};

/// First-order response of probabilities, branch states and entropies to one ET.
struct FirstOrderData {
  double k_ij = 0.0;  // equals k_ji for plane rotations; sign-flipped for phase ETs
  double k_ji = 0.0;
  double a_ij = 0.0;
  double a_ji = 0.0;
  Complex b_ij;
  Complex b_ji;
  Eigen::MatrixXcd delta_ij;  // Hermitian d1 x d1
  Eigen::MatrixXcd delta_ji;
  double s1_ij = 0.0;
  double s1_ji = 0.0;
  double sbar1 = 0.0;  // first-order slope of the average entropy
};

/// Rotated basis: |i'> = |i> + eps |j>, |j'> = |j> - eps |i>, both rescaled by
/// (1 + eps^2)^(-1/2). When probabilities are supplied the pair admissibility
/// rule is enforced (one vanishing probability and one finite is rejected).
MeasurementBasis elementary_transform(const MeasurementBasis& bsm, const ETStep& step,
                                      const Eigen::VectorXd* probabilities = nullptr);

/// <xi_i|rho_E|xi_j> + <xi_j|rho_E|xi_i>; real by Hermiticity.
double coupling_k(const DensityMatrix& rho_env, const MeasurementBasis& bsm, int i, int j);

FirstOrderData first_order_data(const StateVector& psi, const Partition& partition,
                                const MeasurementBasis& bsm, int i, int j, bool phase = false);

/// Same computation over a precomputed localization and environment density matrix.
FirstOrderData first_order_data(const LocalizationResult& loc, const DensityMatrix& rho_env,
                                const MeasurementBasis& bsm, int i, int j, bool phase = false);

struct OptimalityReport {
  Eigen::MatrixXd pair_slopes;  // antisymmetric; entry (i, j) is sbar1 of the (i, j) ET
  Eigen::VectorXd probabilities;
  double max_abs_residual = 0.0;
  bool stationary = false;
  double stationarity_tol = 1e-8;
};

/// First-order slopes of every admissible pair; stationary when the largest
/// magnitude is below the tolerance. Pairs whose support-restricted traces are
/// undefined raise ill_defined_limit unless skip_ill_defined marks them NaN and
/// drops them from the maximum (such a report is never stationary).
OptimalityReport optimality_residual(const StateVector& psi, const Partition& partition,
                                     const MeasurementBasis& bsm, double stationarity_tol = 1e-8,
                                     bool include_phase = false, bool skip_ill_defined = false);

struct FiniteDifferenceRow {
  double epsilon = 0.0;
  double defect = 0.0;  // |S(eps) - S - eps * sbar1|
};

struct FiniteDifferenceCheck {
  std::vector<FiniteDifferenceRow> rows;
  double slope = 0.0;  // log-log fit of defect against epsilon
  double sbar1 = 0.0;
};

/// Validates the first-order prediction: the defect must shrink quadratically.
FiniteDifferenceCheck finite_difference_check(const StateVector& psi, const Partition& partition,
                                              const MeasurementBasis& bsm, const ETStep& pair,
                                              const std::vector<double>& eps_list);

}  // namespace lecm
