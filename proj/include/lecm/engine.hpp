#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "lecm/basis.hpp"
#include "lecm/model.hpp"
#include "lecm/state.hpp"

namespace lecm {

/// y = H x for the j1-j2 Hamiltonian restricted to the sector. Matrix-free;
/// the output range may be partitioned across workers, the result is
/// independent of the worker count.
void apply_hamiltonian(const ModelParams& params, const BasisSector& sector,
                       const Eigen::VectorXd& x, Eigen::VectorXd& y);

/// Convenience overload returning H x on StateVector level (unnormalized result
/// amplitudes; callers renormalize).
Eigen::VectorXd apply_hamiltonian(const ModelParams& params, const BasisSector& sector,
                                  const StateVector& v);

/// y = sum over the given pairs of (S_a . S_b) x, each pair weighted by its j.
void apply_spin_pairs(const std::vector<Bond>& pairs, const BasisSector& sector,
                      const Eigen::VectorXd& x, Eigen::VectorXd& y);

/// <x| S_tot^2 |x> for a normalized sector vector.
double total_spin_squared(const BasisSector& sector, const Eigen::VectorXd& x);

/// Dense Hamiltonian matrix of the sector (oracle-scale sizes only).
Eigen::MatrixXd dense_hamiltonian(const ModelParams& params, const BasisSector& sector);

struct LanczosOptions {
  double tol = 1e-12;            // successive Ritz-value change
  double residual_factor = 1e-10;  // ||Hv - Ev|| <= residual_factor * max(1, |E|)
  int max_iters = 2000;          // matrix applications
  std::uint64_t seed = 0x5EED;
  int window = 0;                // 0 = pick from the dimension
  int thick = 16;                // Ritz vectors kept across a restart
};

struct GroundStateResult {
  double energy = 0.0;
  StateVector vector;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Lowest eigenpair by thick-restart Lanczos with full reorthogonalization
/// inside the active window. Deterministic for a fixed seed. Decoupled layouts
/// are solved per chain and composed as a product state.
GroundStateResult ground_state(const ModelParams& params, SectorPtr sector,
                               const LanczosOptions& options = {});

/// Full dense eigensolve of the sector Hamiltonian; test oracle for ground_state.
GroundStateResult dense_ground_state(const ModelParams& params, SectorPtr sector);

/// Number of threads used by apply_hamiltonian; 0 restores the default.
void set_engine_threads(int n);

}  // namespace lecm
