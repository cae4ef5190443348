#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "lecm/engine.hpp"

namespace lecm {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using ApplyFn = std::function<void(const VectorXd&, VectorXd&)>;

struct LanczosOutcome {
  double energy = 0.0;
  VectorXd vector;
  int matvecs = 0;
  double residual = 0.0;
  bool converged = false;
};

// Thick-restart Lanczos for the lowest eigenpair. The projected matrix is kept
// dense and rebuilt from the recorded CGS2 coefficients, so Rayleigh-Ritz stays
// valid after restarts introduce arrowhead couplings.
LanczosOutcome lanczos_lowest(const ApplyFn& apply, std::int64_t dim,
                              const LanczosOptions& options) {
  const int window = std::max(
      2, static_cast<int>(std::min<std::int64_t>(
             dim, options.window > 0 ? options.window : (dim < 100000 ? 256 : 96))));
  const int thick = std::max(1, std::min(options.thick, window / 3));

  MatrixXd basis(dim, window);
  MatrixXd projected = MatrixXd::Zero(window, window);
  VectorXd w(dim), coeffs, coeffs2;

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::int64_t i = 0; i < dim; ++i) w[i] = gauss(rng);
  w.normalize();
  basis.col(0) = w;

  int m = 1;
  int matvecs = 0;
  double theta_prev = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  LanczosOutcome out;

  Eigen::SelfAdjointEigenSolver<MatrixXd> small;

  while (matvecs < options.max_iters) {
    apply(basis.col(m - 1), w);
    ++matvecs;

    coeffs = basis.leftCols(m).transpose() * w;
    w.noalias() -= basis.leftCols(m) * coeffs;
    coeffs2 = basis.leftCols(m).transpose() * w;
    w.noalias() -= basis.leftCols(m) * coeffs2;
    coeffs += coeffs2;
    projected.col(m - 1).head(m) = coeffs;
    projected.row(m - 1).head(m) = coeffs.transpose();

    double beta = w.norm();
    scale = std::max({scale, std::abs(coeffs[m - 1]), beta});

    small.compute(projected.topLeftCorner(m, m));
    const double theta = small.eigenvalues()(0);
    const double res_estimate = beta * std::abs(small.eigenvectors()(m - 1, 0));
    const double res_target = options.residual_factor * std::max(1.0, std::abs(theta));
    const bool exhausted = m == dim && beta <= 1e-13 * scale;

    if ((std::abs(theta - theta_prev) <= options.tol * std::max(1.0, std::abs(theta)) &&
         res_estimate <= res_target) ||
        res_estimate <= 0.01 * res_target || exhausted) {
      VectorXd x = basis.leftCols(m) * small.eigenvectors().col(0);
      x.normalize();
      VectorXd hx(dim);
      apply(x, hx);
      ++matvecs;
      const double energy = x.dot(hx);
      const double residual = (hx - energy * x).norm();
      out.energy = energy;
      out.vector = std::move(x);
      out.matvecs = matvecs;
      out.residual = residual;
      if (residual <= options.residual_factor * std::max(1.0, std::abs(energy)) || exhausted) {
        out.converged = true;
        return out;
      }
    }
    theta_prev = theta;

    if (beta <= 1e-13 * scale) {
      if (m == dim) break;  // handled above
      // invariant subspace: continue with a fresh orthogonal direction
      for (std::int64_t i = 0; i < dim; ++i) w[i] = gauss(rng);
      for (int pass = 0; pass < 2; ++pass)
        w.noalias() -= basis.leftCols(m) * (basis.leftCols(m).transpose() * w).eval();
      beta = w.norm();
      if (beta < 1e-14) break;
      w /= beta;
      beta = 0.0;
      if (m < window) {  // m == window falls through to the restart with this direction
        basis.col(m) = w;
        projected(m, m - 1) = projected(m - 1, m) = 0.0;
        ++m;
        continue;
      }
    } else {
      w /= beta;
    }

    if (m == window) {
      const int keep = std::min(thick, m - 1);
      MatrixXd ritz = basis.leftCols(m) * small.eigenvectors().leftCols(keep);
      basis.leftCols(keep) = ritz;
      projected.setZero();
      for (int i = 0; i < keep; ++i) projected(i, i) = small.eigenvalues()(i);
      basis.col(keep) = w;
      m = keep + 1;
    } else {
      basis.col(m) = w;
      projected(m, m - 1) = projected(m - 1, m) = beta;
      ++m;
    }
  }

  if (!out.vector.size()) {
    small.compute(projected.topLeftCorner(m, m));
    VectorXd x = basis.leftCols(m) * small.eigenvectors().col(0);
    x.normalize();
    VectorXd hx(dim);
    apply(x, hx);
    out.energy = x.dot(hx);
    out.residual = (hx - out.energy * x).norm();
    out.vector = std::move(x);
    out.matvecs = matvecs + 1;
  }
  out.converged = false;
  return out;
}

GroundStateResult single_chain_ground_state(const ModelParams& params, SectorPtr sector,
                                            const LanczosOptions& options) {
  const auto bonds = model_bonds(params);
  const BasisSector& basis = *sector;
  ApplyFn apply = [&](const VectorXd& x, VectorXd& y) { apply_spin_pairs(bonds, basis, x, y); };
  auto outcome = lanczos_lowest(apply, static_cast<std::int64_t>(sector->size()), options);
  if (!outcome.converged) {
    std::ostringstream msg;
    msg << "Lanczos did not converge within " << options.max_iters
        << " iterations; best estimate E = " << outcome.energy
        << ", residual = " << outcome.residual;
    throw Error(Errc::convergence, msg.str());
  }
  GroundStateResult result{outcome.energy,
                           StateVector::real(sector, std::move(outcome.vector)),
                           outcome.matvecs, outcome.residual};
  return result;
}

// Decoupled layout: each chain is solved per magnetization split and the best
// split is composed as a product state in the combined sector.
GroundStateResult decoupled_ground_state(const ModelParams& params, SectorPtr sector,
                                         const LanczosOptions& options) {
  const int half = params.n_sites / 2;
  ModelParams chain = params;
  chain.n_sites = half;
  chain.layout = ChainLayout::single;

  std::map<int, GroundStateResult> solved;
  auto solve = [&](int two_sz) -> const GroundStateResult& {
    auto it = solved.find(two_sz);
    if (it == solved.end()) {
      auto sub = BasisSector::magnetization(half, two_sz);
      it = solved.emplace(two_sz, single_chain_ground_state(chain, sub, options)).first;
    }
    return it->second;
  };

  const int total_two_sz = sector->two_sz();
  double best_energy = std::numeric_limits<double>::infinity();
  int best_sza = 0;
  bool found = false;
  for (int sza = -half; sza <= half; ++sza) {
    if ((half + sza) % 2 != 0) continue;
    const int szb = total_two_sz - sza;
    if (std::abs(szb) > half || (half + szb) % 2 != 0) continue;
    const double e = solve(sza).energy + solve(szb).energy;
    if (e < best_energy - 1e-13 ||
        (std::abs(e - best_energy) <= 1e-13 &&
         (std::abs(sza) < std::abs(best_sza) || (std::abs(sza) == std::abs(best_sza) && sza < best_sza)))) {
      best_energy = e;
      best_sza = sza;
      found = true;
    }
  }
  if (!found) fail(Errc::invalid_argument, "no magnetization split matches the requested sector");

  const auto& ga = solve(best_sza);
  const auto& gb = solve(total_two_sz - best_sza);
  const auto& amp_a = ga.vector.real_amplitudes();
  const auto& amp_b = gb.vector.real_amplitudes();
  const auto& states_a = ga.vector.sector().states();
  const auto& states_b = gb.vector.sector().states();

  VectorXd v = VectorXd::Zero(sector->size());
  for (std::size_t ib = 0; ib < states_b.size(); ++ib) {
    const std::uint64_t high = states_b[ib] << half;
    for (std::size_t ia = 0; ia < states_a.size(); ++ia)
      v[sector->rank(high | states_a[ia])] = amp_a[ia] * amp_b[ib];
  }
  v.normalize();

  const auto bonds = model_bonds(params);
  VectorXd hv;
  apply_spin_pairs(bonds, *sector, v, hv);
  const double energy = v.dot(hv);
  const double residual = (hv - energy * v).norm();
  return {energy, StateVector::real(sector, std::move(v)),
          ga.iterations + gb.iterations, residual};
}

}  // namespace

GroundStateResult ground_state(const ModelParams& params, SectorPtr sector,
                               const LanczosOptions& options) {
  params.validate();
  if (sector->n_sites() != params.n_sites)
    fail(Errc::sector_mismatch, "sector and model disagree on n_sites");
  if (sector->size() == 0) fail(Errc::invalid_argument, "sector is empty");
  if (params.layout == ChainLayout::two_decoupled)
    return decoupled_ground_state(params, sector, options);
  return single_chain_ground_state(params, sector, options);
}

GroundStateResult dense_ground_state(const ModelParams& params, SectorPtr sector) {
  params.validate();
  if (sector->n_sites() != params.n_sites)
    fail(Errc::sector_mismatch, "sector and model disagree on n_sites");
  if (sector->size() > 16384) fail(Errc::size_limit, "sector too large for the dense oracle");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_hamiltonian(params, *sector));
  VectorXd x = solver.eigenvectors().col(0);
  x.normalize();
  VectorXd hx;
  apply_spin_pairs(model_bonds(params), *sector, x, hx);
  const double energy = solver.eigenvalues()(0);
  const double residual = (hx - energy * x).norm();
  return {energy, StateVector::real(sector, std::move(x)), 1, residual};
}

}  // namespace lecm
