#pragma once

#include <memory>
#include <string>

#include "lecm/localize.hpp"

namespace lecm {

inline constexpr double kDegeneracyTol = 1e-9;

/// Environment pattern support of a state: the distinct env-bit patterns
/// (full-chain bit positions) that occur in the basis, sorted.
struct EnvSupport {
  std::vector<std::uint64_t> patterns;
  std::vector<int> env_sites;
  int n_env = 0;

  std::ptrdiff_t row_of(std::uint64_t pattern) const;  // -1 when absent
};

/// Hermitian operator on the environment used to resolve degenerate
/// eigenvalue clusters of the environment density matrix. Implementations
/// return V^dagger (O V) for a block of support-restricted env vectors.
class EnvOperator {
 public:
  virtual ~EnvOperator() = default;
  virtual std::string name() const = 0;
  virtual Eigen::MatrixXcd block_elements(const EnvSupport& support,
                                          const Eigen::MatrixXcd& vectors) const = 0;
};

/// Total z-magnetization of the environment (in units of one spin flip).
std::unique_ptr<EnvOperator> env_sz_operator();

/// Spatial reflection of the chain (site -> n-1-site) restricted to the
/// environment; requires the env site set to be reflection-closed.
std::unique_ptr<EnvOperator> env_reflection_operator(int n_sites);

/// Arbitrary dense Hermitian matrix over the full env space (desk scale).
std::unique_ptr<EnvOperator> env_dense_operator(std::string name, Eigen::MatrixXcd matrix);

struct LecmResult {
  LocalizationResult localization;
  SchmidtDecomposition decomposition;
  std::string degeneracy_policy_applied;
  double singlet_weight = std::numeric_limits<double>::quiet_NaN();
  double triplet_weight = std::numeric_limits<double>::quiet_NaN();
};

/// Localized entanglement under the canonical measurement: the measurement
/// basis is the eigenbasis of the environment's reduced density matrix, with
/// degenerate eigenvalue clusters resolved by the given symmetry operators in
/// order, then a deterministic phase and ordering convention.
LecmResult canonical_localization(const StateVector& psi, const Partition& partition,
                const std::vector<const EnvOperator*>& symmetry_ops = {});

/// Symmetry operators named in configuration files: env_sz, env_reflection.
std::vector<std::unique_ptr<EnvOperator>> named_symmetry_ops(const std::vector<std::string>& names,
                                                             int n_sites);

struct TwoSiteLecm {
  double lambda_s = 0.0;  // singlet weight
  double lambda_t = 0.0;  // m = 0 triplet weight
  double sbar = 0.0;
};

/// Two single-site spin-1/2 parts: the canonical average entropy from the
/// symmetry-adapted eigenbasis {up-up, triplet0, singlet, down-down} of a
/// 4 x 4 system density matrix (basis index = bit(site a) + 2 bit(site b)).
TwoSiteLecm two_site_lecm_spin_half(const DensityMatrix& rho_s);

/// Canonical measurement basis materialized over the full env space
/// (env_dim limited to 4096).
MeasurementBasis canonical_bsm(const StateVector& psi, const Partition& partition,
                               const std::vector<const EnvOperator*>& symmetry_ops = {});

/// Residual of the support-restricted trace condition between two branches of
/// a localization produced with the canonical basis.
double reduced_condition_residual(const LocalizationResult& loc, int i, int j);

}  // namespace lecm
