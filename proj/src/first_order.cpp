#include "lecm/first_order.hpp"

#include <cmath>

namespace lecm {

void ETStep::validate() const {
  if (i == j) fail(Errc::invalid_argument, "an ET must mix two distinct vectors");
  if (i < 0 || j < 0) fail(Errc::invalid_argument, "ET indices must be nonnegative");
  if (std::abs(epsilon) > 0.1)
    fail(Errc::invalid_argument, "|epsilon| must stay within the first-order regime (<= 0.1)");
}

MeasurementBasis elementary_transform(const MeasurementBasis& bsm, const ETStep& step,
                                      const Eigen::VectorXd* probabilities) {
  step.validate();
  if (step.i >= bsm.count() || step.j >= bsm.count())
    fail(Errc::invalid_argument, "ET index exceeds the basis size");
  if (probabilities) {
    const bool pi = (*probabilities)(step.i) > kProbabilityTol;
    const bool pj = (*probabilities)(step.j) > kProbabilityTol;
    if (pi != pj)
      fail(Errc::inadmissible_et,
           "ET mixing one vanishing and one finite probability is not allowed");
  }
  MeasurementBasis out = bsm;
  const Eigen::VectorXcd vi = bsm.vectors.col(step.i);
  const Eigen::VectorXcd vj = bsm.vectors.col(step.j);
  const double scale = 1.0 / std::sqrt(1.0 + step.epsilon * step.epsilon);
  if (!step.phase) {
    out.vectors.col(step.i) = scale * (vi + step.epsilon * vj);
    out.vectors.col(step.j) = scale * (vj - step.epsilon * vi);
  } else {
    const Complex ie(0.0, step.epsilon);
    out.vectors.col(step.i) = scale * (vi + ie * vj);
    out.vectors.col(step.j) = scale * (vj + ie * vi);
  }
  return out;
}

double coupling_k(const DensityMatrix& rho_env, const MeasurementBasis& bsm, int i, int j) {
  if (i == j) fail(Errc::invalid_argument, "coupling_k needs two distinct vectors");
  if (i < 0 || j < 0 || i >= bsm.count() || j >= bsm.count())
    fail(Errc::invalid_argument, "basis index out of range");
  const Complex forward = (bsm.vectors.col(i).adjoint() * rho_env.m * bsm.vectors.col(j))(0);
  const Complex backward = (bsm.vectors.col(j).adjoint() * rho_env.m * bsm.vectors.col(i))(0);
  return (forward + backward).real();
}

FirstOrderData first_order_data(const LocalizationResult& loc, const DensityMatrix& rho_env,
                                const MeasurementBasis& bsm, int i, int j, bool phase) {
  if (i == j || i < 0 || j < 0 || i >= bsm.count() || j >= bsm.count())
    fail(Errc::invalid_argument, "pair indices out of range");
  const double p_i = loc.probabilities(i);
  const double p_j = loc.probabilities(j);
  const bool active_i = p_i > kProbabilityTol;
  const bool active_j = p_j > kProbabilityTol;

  FirstOrderData data;
  const int d1 = loc.d1;
  data.delta_ij = Eigen::MatrixXcd::Zero(d1, d1);
  data.delta_ji = Eigen::MatrixXcd::Zero(d1, d1);
  if (!active_i && !active_j) return data;  // vanishing couplings force a zero slope
  if (active_i != active_j)
    fail(Errc::inadmissible_et, "ET mixing one vanishing and one finite probability is not allowed");

  const Complex rho_ij = (bsm.vectors.col(i).adjoint() * rho_env.m * bsm.vectors.col(j))(0);
  double k;
  Complex b_ij, b_ji;
  if (!phase) {
    k = 2.0 * rho_ij.real();
    b_ij = std::sqrt(p_j / p_i);
    b_ji = std::sqrt(p_i / p_j);
  } else {
    k = -2.0 * rho_ij.imag();
    b_ij = Complex(0.0, -std::sqrt(p_j / p_i));
    b_ji = Complex(0.0, std::sqrt(p_i / p_j));
  }
  data.k_ij = data.k_ji = k;
  data.a_ij = -0.5 * k / p_i;
  data.a_ji = -0.5 * k / p_j;
  data.b_ij = b_ij;
  data.b_ji = b_ji;

  const Eigen::MatrixXcd& q = loc.branches[i];
  const Eigen::MatrixXcd& r = loc.branches[j];
  const Eigen::MatrixXcd qr = q * r.adjoint();
  const Eigen::MatrixXcd rq = r * q.adjoint();
  data.delta_ij = 0.5 * (qr + rq);
  data.delta_ji = data.delta_ij;

  const DensityMatrix rho_i{q * q.adjoint()};
  const DensityMatrix rho_j{r * r.adjoint()};
  const Eigen::MatrixXcd shift_ij =
      2.0 * data.a_ij * rho_i.m + (b_ij * rq + std::conj(b_ij) * qr);
  const Eigen::MatrixXcd shift_ji =
      2.0 * data.a_ji * rho_j.m + (b_ji * qr + std::conj(b_ji) * rq);
  data.s1_ij = support_trace_log(shift_ij, rho_i);
  data.s1_ji = support_trace_log(shift_ji, rho_j);
  data.sbar1 = k * loc.entropies(i) - p_i * data.s1_ij - k * loc.entropies(j) + p_j * data.s1_ji;
  return data;
}

FirstOrderData first_order_data(const StateVector& psi, const Partition& partition,
                                const MeasurementBasis& bsm, int i, int j, bool phase) {
  const LocalizationResult loc = localize(psi, partition, bsm);
  const DensityMatrix rho_env = reduced_density_matrix(psi, partition.env_sites);
  return first_order_data(loc, rho_env, bsm, i, j, phase);
}

OptimalityReport optimality_residual(const StateVector& psi, const Partition& partition,
                                     const MeasurementBasis& bsm, double stationarity_tol,
                                     bool include_phase, bool skip_ill_defined) {
  const LocalizationResult loc = localize(psi, partition, bsm);
  const DensityMatrix rho_env = reduced_density_matrix(psi, partition.env_sites);
  const int count = bsm.count();

  OptimalityReport report;
  report.stationarity_tol = stationarity_tol;
  report.pair_slopes.setZero(count, count);
  report.probabilities = loc.probabilities;
  bool undefined_pairs = false;
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) {
      const bool active_i = loc.probabilities(i) > kProbabilityTol;
      const bool active_j = loc.probabilities(j) > kProbabilityTol;
      if (active_i != active_j) continue;  // not reachable by an admissible ET
      double slope = 0.0;
      if (active_i && active_j) {
        try {
          slope = first_order_data(loc, rho_env, bsm, i, j, false).sbar1;
          if (include_phase) {
            const double phase_slope = first_order_data(loc, rho_env, bsm, i, j, true).sbar1;
            if (std::abs(phase_slope) > std::abs(slope)) slope = phase_slope;
          }
        } catch (const Error& e) {
          if (e.code() != Errc::ill_defined_limit || !skip_ill_defined) throw;
          undefined_pairs = true;
          slope = std::numeric_limits<double>::quiet_NaN();
        }
      }
      report.pair_slopes(i, j) = slope;
      report.pair_slopes(j, i) = -slope;
      if (std::isfinite(slope))
        report.max_abs_residual = std::max(report.max_abs_residual, std::abs(slope));
    }
  report.stationary = !undefined_pairs && report.max_abs_residual < stationarity_tol;
  return report;
}

FiniteDifferenceCheck finite_difference_check(const StateVector& psi, const Partition& partition,
                                              const MeasurementBasis& bsm, const ETStep& pair,
                                              const std::vector<double>& eps_list) {
  const LocalizationResult base = localize(psi, partition, bsm);
  const DensityMatrix rho_env = reduced_density_matrix(psi, partition.env_sites);
  const FirstOrderData data = first_order_data(base, rho_env, bsm, pair.i, pair.j, pair.phase);

  FiniteDifferenceCheck check;
  check.sbar1 = data.sbar1;
  for (double eps : eps_list) {
    ETStep step = pair;
    step.epsilon = eps;
    double defect = 0.0;
    if (eps != 0.0) {
      const MeasurementBasis rotated = elementary_transform(bsm, step, &base.probabilities);
      const double rotated_avg = localize(psi, partition, rotated).average;
      defect = std::abs(rotated_avg - base.average - eps * data.sbar1);
    }
    check.rows.push_back({eps, defect});
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& row : check.rows) {
    if (row.epsilon == 0.0 || row.defect <= 0.0) continue;
    const double x = std::log(std::abs(row.epsilon));
    const double y = std::log(row.defect);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && sxx * n - sx * sx > 0)
    check.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  else
    check.slope = std::numeric_limits<double>::infinity();  // defect at roundoff everywhere
  return check;
}

}  // namespace lecm
