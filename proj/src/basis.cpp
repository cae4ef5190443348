#include "lecm/basis.hpp"

#include <array>
#include <bit>
#include <sstream>

namespace lecm {

namespace {

constexpr int kMaxBits = 64;

const std::array<std::array<std::uint64_t, kMaxBits + 1>, kMaxBits + 1>& binomial_table() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kMaxBits + 1>, kMaxBits + 1> t{};
    for (int n = 0; n <= kMaxBits; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}

// Next-higher integer with the same popcount (Gosper).
std::uint64_t next_same_popcount(std::uint64_t v) {
  std::uint64_t c = v & (~v + 1);
  std::uint64_t r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n || n > kMaxBits) return 0;
  return binomial_table()[n][k];
}

std::shared_ptr<const BasisSector> BasisSector::magnetization(int n_sites, int two_sz) {
  if (n_sites < 1 || n_sites > 30)
    fail(Errc::invalid_argument, "n_sites must be within [1, 30]");
  if (std::abs(two_sz) > n_sites)
    fail(Errc::invalid_argument, "|two_sz| exceeds n_sites");
  if ((n_sites + two_sz) % 2 != 0)
    fail(Errc::invalid_argument, "n_sites + two_sz must be even");

  const int n_up = (n_sites + two_sz) / 2;
  auto sector = std::shared_ptr<BasisSector>(new BasisSector());
  sector->n_sites_ = n_sites;
  sector->two_sz_ = two_sz;
  sector->n_up_ = n_up;
  sector->restricted_ = true;
  sector->states_.reserve(binomial(n_sites, n_up));
  if (n_up == 0) {
    sector->states_.push_back(0);
  } else {
    const std::uint64_t limit = std::uint64_t{1} << n_sites;
    for (std::uint64_t s = (std::uint64_t{1} << n_up) - 1; s < limit; s = next_same_popcount(s))
      sector->states_.push_back(s);
  }
  return sector;
}

std::shared_ptr<const BasisSector> BasisSector::full(int n_sites) {
  if (n_sites < 1 || n_sites > 24)
    fail(Errc::invalid_argument, "full basis limited to n_sites within [1, 24]");
  auto sector = std::shared_ptr<BasisSector>(new BasisSector());
  sector->n_sites_ = n_sites;
  sector->two_sz_ = 0;
  sector->n_up_ = -1;
  sector->restricted_ = false;
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  sector->states_.resize(dim);
  for (std::uint64_t s = 0; s < dim; ++s) sector->states_[s] = s;
  return sector;
}

bool BasisSector::contains(std::uint64_t pattern) const noexcept {
  if (pattern >> n_sites_) return false;
  if (!restricted_) return true;
  return std::popcount(pattern) == n_up_;
}

std::size_t BasisSector::rank(std::uint64_t pattern) const noexcept {
  if (!restricted_) return static_cast<std::size_t>(pattern);
  // Colex rank of the set-bit positions: sum of C(position_i, i), i = 1..k.
  const auto& binom = binomial_table();
  std::uint64_t r = 0;
  int i = 1;
  while (pattern) {
    const int c = std::countr_zero(pattern);
    r += binom[c][i++];
    pattern &= pattern - 1;
  }
  return static_cast<std::size_t>(r);
}

std::size_t BasisSector::index_of(std::uint64_t pattern) const {
  if (!contains(pattern)) {
    std::ostringstream msg;
    msg << "pattern " << pattern << " is not in the basis (n=" << n_sites_;
    if (restricted_) msg << ", two_sz=" << two_sz_;
    msg << ")";
    fail(Errc::sector_mismatch, msg.str());
  }
  return rank(pattern);
}

}  // namespace lecm
