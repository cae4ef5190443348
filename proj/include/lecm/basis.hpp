#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lecm/errors.hpp"

namespace lecm {

/// C(n, k) from a precomputed table, 0 for k < 0 or k > n. Valid for n <= 64.
std::uint64_t binomial(int n, int k);

/// Ordered basis of bit-patterns for a spin-1/2 chain. Bit b set = site b up.
/// Either a fixed-magnetization sector (all patterns of one popcount, ascending)
/// or the full 2^n space (pattern == ordinal).
class BasisSector {
 public:
  static std::shared_ptr<const BasisSector> magnetization(int n_sites, int two_sz);
  static std::shared_ptr<const BasisSector> full(int n_sites);

  int n_sites() const noexcept { return n_sites_; }
  int two_sz() const noexcept { return two_sz_; }
  bool restricted() const noexcept { return restricted_; }
  int popcount() const noexcept { return n_up_; }

  std::size_t size() const noexcept { return states_.size(); }
  std::uint64_t state(std::size_t ordinal) const { return states_[ordinal]; }
  const std::vector<std::uint64_t>& states() const noexcept { return states_; }

  bool contains(std::uint64_t pattern) const noexcept;

  /// Ordinal of a pattern; throws sector_mismatch if the pattern is not in the basis.
  std::size_t index_of(std::uint64_t pattern) const;

  /// Ordinal lookup without membership validation (pattern must be in the basis).
  std::size_t rank(std::uint64_t pattern) const noexcept;

 private:
  BasisSector() = default;

  int n_sites_ = 0;
  int two_sz_ = 0;
  int n_up_ = 0;
  bool restricted_ = true;
  std::vector<std::uint64_t> states_;
};

using SectorPtr = std::shared_ptr<const BasisSector>;

}  // namespace lecm
