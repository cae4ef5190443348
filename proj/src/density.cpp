#include "lecm/density.hpp"

#include <bit>
#include <cmath>

namespace lecm {

namespace {

constexpr double kTruncTol = 1e-12;

std::uint64_t place_config(std::uint32_t config, const std::vector<int>& sites) {
  std::uint64_t pattern = 0;
  for (std::size_t t = 0; t < sites.size(); ++t)
    if ((config >> t) & 1) pattern |= std::uint64_t{1} << sites[t];
  return pattern;
}

std::uint32_t extract_config(std::uint64_t pattern, const std::vector<int>& sites) {
  std::uint32_t config = 0;
  for (std::size_t t = 0; t < sites.size(); ++t)
    config |= static_cast<std::uint32_t>((pattern >> sites[t]) & 1) << t;
  return config;
}

template <typename Vec>
Eigen::MatrixXcd partial_trace(const Vec& amps, const BasisSector& sector,
                               const std::vector<int>& keep) {
  const int nk = static_cast<int>(keep.size());
  const std::uint32_t n_configs = std::uint32_t{1} << nk;
  std::uint64_t keep_mask = 0;
  for (int site : keep) keep_mask |= std::uint64_t{1} << site;

  std::vector<std::uint64_t> placed(n_configs);
  std::vector<std::vector<std::uint32_t>> partners(n_configs);
  for (std::uint32_t c = 0; c < n_configs; ++c) placed[c] = place_config(c, keep);
  for (std::uint32_t c = 0; c < n_configs; ++c)
    for (std::uint32_t c2 = 0; c2 < n_configs; ++c2) {
      if (c2 == c) continue;
      if (sector.restricted() && std::popcount(c) != std::popcount(c2)) continue;
      partners[c].push_back(c2);
    }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n_configs, n_configs);
  const auto& states = sector.states();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::uint64_t s = states[i];
    const std::uint32_t c = extract_config(s, keep);
    const auto v = amps[i];
    rho(c, c) += Complex(std::norm(v), 0.0);
    const std::uint64_t rest = s & ~keep_mask;
    for (std::uint32_t c2 : partners[c]) {
      const std::uint64_t partner = rest | placed[c2];
      rho(c, c2) += v * std::conj(amps[sector.rank(partner)]);
    }
  }
  return 0.5 * (rho + rho.adjoint().eval());
}

}  // namespace

void DensityMatrix::validate(double tol) const {
  if (m.rows() != m.cols()) fail(Errc::invalid_density, "density matrix must be square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
    fail(Errc::invalid_density, "density matrix is not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol)
    fail(Errc::invalid_density, "density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues()(0) < -100 * tol)
    fail(Errc::invalid_density, "density matrix has a negative eigenvalue");
}

DensityMatrix reduced_density_matrix(const StateVector& psi, const std::vector<int>& keep_sites) {
  if (keep_sites.empty()) fail(Errc::invalid_argument, "keep_sites must be nonempty");
  if (keep_sites.size() > 12) fail(Errc::size_limit, "kept subsystem exceeds 12 sites");
  std::uint64_t seen = 0;
  for (int site : keep_sites) {
    if (site < 0 || site >= psi.n_sites()) fail(Errc::invalid_argument, "site index out of range");
    const std::uint64_t bit = std::uint64_t{1} << site;
    if (seen & bit) fail(Errc::invalid_argument, "site listed twice");
    seen |= bit;
  }
  DensityMatrix rho;
  if (psi.is_real())
    rho.m = partial_trace(psi.real_amplitudes(), psi.sector(), keep_sites);
  else
    rho.m = partial_trace(psi.complex_amplitudes(), psi.sector(), keep_sites);
  return rho;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  if (std::abs(rho.m.trace().real() - 1.0) > 1e-8)
    fail(Errc::invalid_density, "density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.m, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = std::clamp(solver.eigenvalues()(i), 0.0, 1.0);
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

double branch_entropy(const Eigen::MatrixXcd& branch) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(branch);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double lambda = std::clamp(svd.singularValues()(i) * svd.singularValues()(i), 0.0, 1.0);
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

double support_trace_log(const Eigen::MatrixXcd& delta, const DensityMatrix& rho,
                         double kernel_tol) {
  if (delta.rows() != rho.m.rows() || delta.cols() != rho.m.cols())
    fail(Errc::invalid_argument, "operand dimensions differ");
  if ((delta - delta.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    fail(Errc::invalid_argument, "delta is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.m);
  const auto& lambdas = solver.eigenvalues();
  const Eigen::MatrixXcd rotated = solver.eigenvectors().adjoint() * delta * solver.eigenvectors();

  double kernel_block = 0.0;
  for (Eigen::Index a = 0; a < lambdas.size(); ++a)
    for (Eigen::Index b = 0; b < lambdas.size(); ++b)
      if (lambdas(a) <= kTruncTol && lambdas(b) <= kTruncTol)
        kernel_block += std::norm(rotated(a, b));
  if (std::sqrt(kernel_block) > kernel_tol)
    fail(Errc::ill_defined_limit,
         "delta does not vanish on the kernel of rho; the support-restricted trace is undefined");

  double value = 0.0;
  for (Eigen::Index a = 0; a < lambdas.size(); ++a)
    if (lambdas(a) > kTruncTol) value += rotated(a, a).real() * std::log2(lambdas(a));
  return value;
}

}  // namespace lecm
