#include "lecm/optimizer.hpp"

#include <cmath>
#include <random>

namespace lecm {

void OptimizerConfig::validate() const {
  if (!(step_init > 0.0 && step_init <= 0.1))
    fail(Errc::invalid_argument, "step_init must lie in (0, 0.1]");
  if (!(step_shrink > 0.0 && step_shrink < 1.0))
    fail(Errc::invalid_argument, "step_shrink must lie in (0, 1)");
  if (stationarity_tol <= 0.0) fail(Errc::invalid_argument, "stationarity_tol must be positive");
  if (max_iters < 1 || reorthonormalize_every < 1)
    fail(Errc::invalid_argument, "iteration controls must be positive");
}

MeasurementBasis reorthonormalize(const MeasurementBasis& bsm) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(bsm.vectors);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(bsm.vectors.rows(), bsm.vectors.cols());
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(bsm.vectors.cols()).triangularView<Eigen::Upper>();
  for (int c = 0; c < q.cols(); ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(c) *= std::conj(d) / mag;
  }
  MeasurementBasis out = bsm;
  out.vectors = std::move(q);
  return out;
}

namespace {

struct BestPair {
  int i = -1;
  int j = -1;
  bool phase = false;
  double slope = 0.0;
};

BestPair pick_pair(const LocalizationResult& loc, const DensityMatrix& rho_env,
                   const MeasurementBasis& bsm, bool use_phase, bool* any_admissible) {
  BestPair best;
  *any_admissible = false;
  const int count = bsm.count();
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) {
      const bool active_i = loc.probabilities(i) > kProbabilityTol;
      const bool active_j = loc.probabilities(j) > kProbabilityTol;
      if (!active_i || !active_j) continue;
      *any_admissible = true;
      for (int variant = 0; variant < (use_phase ? 2 : 1); ++variant) {
        double slope = 0.0;
        try {
          slope = first_order_data(loc, rho_env, bsm, i, j, variant == 1).sbar1;
        } catch (const Error& e) {
          if (e.code() != Errc::ill_defined_limit) throw;
          continue;  // direction unusable this close to a pure branch
        }
        if (std::abs(slope) > std::abs(best.slope)) best = {i, j, variant == 1, slope};
      }
    }
  return best;
}

// Oriented slope along the pair direction after rotating by t * direction.
double directional_slope(const StateVector& psi, const Partition& partition,
                         const MeasurementBasis& bsm, const BestPair& pair,
                         const DensityMatrix& rho_env, double direction, double orientation,
                         double t) {
  const MeasurementBasis rotated =
      t == 0.0 ? bsm : elementary_transform(bsm, {pair.i, pair.j, direction * t, pair.phase});
  const LocalizationResult loc = localize(psi, partition, rotated);
  return orientation * direction *
         first_order_data(loc, rho_env, rotated, pair.i, pair.j, pair.phase).sbar1;
}

}  // namespace

OptimizeOutcome optimize_bsm(const StateVector& psi, const Partition& partition,
                             const MeasurementBasis& start, const OptimizerConfig& config) {
  config.validate();
  start.require_orthonormal();

  const DensityMatrix rho_env = reduced_density_matrix(psi, partition.env_sites);
  const double orientation = config.direction == OptimizeDirection::maximize ? 1.0 : -1.0;

  OptimizeOutcome out;
  out.bsm = start;
  out.localization = localize(psi, partition, out.bsm);
  out.trajectory.push_back(out.localization.average);

  int accepted = 0;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    out.iterations = iter;
    bool any_admissible = false;
    const BestPair pair =
        pick_pair(out.localization, rho_env, out.bsm, config.use_phase_ets, &any_admissible);
    if (!any_admissible) {
      if (out.bsm.count() >= 2 && out.localization.probabilities.size() >= 2) {
        int active = 0;
        for (int i = 0; i < out.bsm.count(); ++i)
          if (out.localization.probabilities(i) > kProbabilityTol) ++active;
        if (active >= 1 && out.bsm.count() - active >= 1)
          fail(Errc::optimizer_stall, "every pair mixes a finite and a vanishing probability");
      }
      out.stationary = true;
      break;
    }
    if (std::abs(pair.slope) < config.stationarity_tol) {
      out.stationary = true;
      break;
    }

    // uphill direction for this goal
    const double direction = orientation * (pair.slope > 0 ? 1.0 : -1.0);
    double step = config.step_init;
    bool moved = false;
    while (step >= 1e-13) {
      // undefined slopes read as overshoot so the search retreats to the
      // evaluable side
      auto probe = [&](double t) {
        try {
          return directional_slope(psi, partition, out.bsm, pair, rho_env, direction,
                                   orientation, t);
        } catch (const Error& e) {
          if (e.code() != Errc::ill_defined_limit) throw;
          return -std::numeric_limits<double>::infinity();
        }
      };
      double t = step;
      if (probe(step) < 0.0) {
        // overshoot: the derivative flips inside (0, step]; bisect to its zero,
        // which brackets the one-dimensional optimum along this rotation
        double lo = 0.0, hi = step;
        for (int iter = 0; iter < 60 && hi - lo > 1e-13; ++iter) {
          const double mid = 0.5 * (lo + hi);
          const double g = probe(mid);
          if (g > 0.25 * config.stationarity_tol)
            lo = mid;
          else if (g < -0.25 * config.stationarity_tol)
            hi = mid;
          else {
            lo = hi = mid;
          }
        }
        t = 0.5 * (lo + hi);
        if (t < 1e-13) break;
      }
      ETStep et{pair.i, pair.j, direction * t, pair.phase};
      const MeasurementBasis trial =
          elementary_transform(out.bsm, et, &out.localization.probabilities);
      const LocalizationResult trial_loc = localize(psi, partition, trial);
      const double gain = orientation * (trial_loc.average - out.localization.average);
      if (gain >= -1e-12) {
        out.bsm = trial;
        out.localization = trial_loc;
        out.trajectory.push_back(trial_loc.average);
        ++accepted;
        if (accepted % config.reorthonormalize_every == 0) {
          out.bsm = reorthonormalize(out.bsm);
          out.localization = localize(psi, partition, out.bsm);
        }
        moved = true;
        break;
      }
      step *= config.step_shrink;
    }
    if (!moved) break;  // no certified progress along the steepest pair
  }

  out.report = optimality_residual(psi, partition, out.bsm, config.stationarity_tol,
                                   config.use_phase_ets, /*skip_ill_defined=*/true);
  out.stationary = out.report.stationary;
  return out;
}

OracleResult random_bsm_oracle(const StateVector& psi, const Partition& partition,
                               std::int64_t n_trials, std::uint64_t seed) {
  partition.validate(psi.n_sites());
  if (partition.env_dim() > 16)
    fail(Errc::size_limit, "random basis oracle is limited to environments of dimension 16");
  if (n_trials < 1) fail(Errc::invalid_argument, "n_trials must be positive");

  const DensityMatrix rho_env = reduced_density_matrix(psi, partition.env_sites);
  const Eigen::Index de = rho_env.dim();

  Eigen::MatrixXcd support;
  if (psi.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rho_env.m.real());
    int rank = 0;
    for (Eigen::Index c = 0; c < de; ++c)
      if (solver.eigenvalues()(c) > kProbabilityTol) ++rank;
    support.resize(de, rank);
    int col = 0;
    for (Eigen::Index c = 0; c < de; ++c)
      if (solver.eigenvalues()(c) > kProbabilityTol)
        support.col(col++) = solver.eigenvectors().col(c).cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_env.m);
    int rank = 0;
    for (Eigen::Index c = 0; c < de; ++c)
      if (solver.eigenvalues()(c) > kProbabilityTol) ++rank;
    support.resize(de, rank);
    int col = 0;
    for (Eigen::Index c = 0; c < de; ++c)
      if (solver.eigenvalues()(c) > kProbabilityTol) support.col(col++) = solver.eigenvectors().col(c);
  }
  const int rank = static_cast<int>(support.cols());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  OracleResult result{-std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
  MeasurementBasis bsm;
  for (std::int64_t trial = 0; trial < n_trials; ++trial) {
    Eigen::MatrixXcd g(rank, rank);
    for (int c = 0; c < rank; ++c)
      for (int r = 0; r < rank; ++r)
        g(r, c) = psi.is_real() ? Complex(gauss(rng), 0.0) : Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rank, rank);
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < rank; ++c) {
      const double mag = std::abs(r(c, c));
      if (mag > 0.0) q.col(c) *= std::conj(r(c, c)) / mag;
    }
    bsm.vectors = support * q;
    const double avg = localize(psi, partition, bsm).average;
    result.best_max = std::max(result.best_max, avg);
    result.best_min = std::min(result.best_min, avg);
  }
  return result;
}

}  // namespace lecm
