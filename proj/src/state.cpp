#include "lecm/state.hpp"

namespace lecm {

namespace {

void check_dim(const BasisSector& sector, Eigen::Index len) {
  if (static_cast<std::size_t>(len) != sector.size())
    fail(Errc::sector_mismatch, "amplitude length does not match the basis dimension");
}

void check_norm(double norm) {
  if (std::abs(norm - 1.0) > 1e-10)
    fail(Errc::invalid_argument, "state vector is not normalized");
}

}  // namespace

StateVector StateVector::real(SectorPtr sector, Eigen::VectorXd amplitudes) {
  check_dim(*sector, amplitudes.size());
  check_norm(amplitudes.norm());
  return StateVector(std::move(sector), std::move(amplitudes), {}, ScalarKind::real);
}

StateVector StateVector::complex(SectorPtr sector, Eigen::VectorXcd amplitudes) {
  check_dim(*sector, amplitudes.size());
  check_norm(amplitudes.norm());
  return StateVector(std::move(sector), {}, std::move(amplitudes), ScalarKind::complex);
}

const Eigen::VectorXd& StateVector::real_amplitudes() const {
  if (kind_ != ScalarKind::real) fail(Errc::invalid_argument, "state is not real-valued");
  return re_;
}

const Eigen::VectorXcd& StateVector::complex_amplitudes() const {
  if (kind_ != ScalarKind::complex) fail(Errc::invalid_argument, "state is not complex-valued");
  return cx_;
}

double StateVector::norm() const {
  return kind_ == ScalarKind::real ? re_.norm() : cx_.norm();
}

StateVector make_full_state(int n_sites,
                            const std::vector<std::pair<std::uint64_t, Complex>>& amplitudes) {
  auto sector = BasisSector::full(n_sites);
  bool real_valued = true;
  for (const auto& [pattern, amp] : amplitudes)
    if (amp.imag() != 0.0) real_valued = false;
  if (real_valued) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(sector->size());
    for (const auto& [pattern, amp] : amplitudes) v[sector->index_of(pattern)] += amp.real();
    v.normalize();
    return StateVector::real(std::move(sector), std::move(v));
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(sector->size());
  for (const auto& [pattern, amp] : amplitudes) v[sector->index_of(pattern)] += amp;
  v.normalize();
  return StateVector::complex(std::move(sector), std::move(v));
}

}  // namespace lecm
