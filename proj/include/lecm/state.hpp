#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "lecm/basis.hpp"

namespace lecm {

using Complex = std::complex<double>;

enum class ScalarKind { real, complex };

/// Normalized amplitude vector over a BasisSector. Heisenberg ground states are
/// real; generic inputs may be complex. Exactly one amplitude array is populated.
class StateVector {
 public:
  static StateVector real(SectorPtr sector, Eigen::VectorXd amplitudes);
  static StateVector complex(SectorPtr sector, Eigen::VectorXcd amplitudes);

  const BasisSector& sector() const noexcept { return *sector_; }
  SectorPtr sector_ptr() const noexcept { return sector_; }
  ScalarKind kind() const noexcept { return kind_; }
  bool is_real() const noexcept { return kind_ == ScalarKind::real; }
  std::size_t dim() const noexcept { return sector_->size(); }
  int n_sites() const noexcept { return sector_->n_sites(); }

  const Eigen::VectorXd& real_amplitudes() const;
  const Eigen::VectorXcd& complex_amplitudes() const;

  Complex amplitude(std::size_t ordinal) const {
    return kind_ == ScalarKind::real ? Complex(re_[ordinal], 0.0) : cx_[ordinal];
  }

  double norm() const;

  /// f(pattern, ordinal, complex amplitude) over every basis state.
  template <typename F>
  void for_each(F&& f) const {
    const auto& states = sector_->states();
    if (kind_ == ScalarKind::real) {
      for (std::size_t i = 0; i < states.size(); ++i) f(states[i], i, Complex(re_[i], 0.0));
    } else {
      for (std::size_t i = 0; i < states.size(); ++i) f(states[i], i, cx_[i]);
    }
  }

 private:
  StateVector(SectorPtr sector, Eigen::VectorXd re, Eigen::VectorXcd cx, ScalarKind kind)
      : sector_(std::move(sector)), re_(std::move(re)), cx_(std::move(cx)), kind_(kind) {}

  SectorPtr sector_;
  Eigen::VectorXd re_;
  Eigen::VectorXcd cx_;
  ScalarKind kind_;
};

/// Builds a normalized state from (pattern, amplitude) assignments in the full
/// 2^n basis; unspecified amplitudes are zero.
StateVector make_full_state(int n_sites,
                            const std::vector<std::pair<std::uint64_t, Complex>>& amplitudes);

}  // namespace lecm
