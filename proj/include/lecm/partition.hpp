#pragma once

#include <vector>

#include "lecm/errors.hpp"

namespace lecm {

/// Split of the chain into the two studied parts and the measured environment.
/// Site lists are kept in caller order; bit t of a local configuration index
/// refers to the t-th listed site.
struct Partition {
  std::vector<int> s1_sites;
  std::vector<int> s2_sites;
  std::vector<int> env_sites;

  static Partition make(int n_sites, std::vector<int> s1, std::vector<int> s2);

  int d1() const noexcept { return 1 << s1_sites.size(); }
  int d2() const noexcept { return 1 << s2_sites.size(); }
  int system_dim() const noexcept { return d1() * d2(); }
  std::int64_t env_dim() const noexcept { return std::int64_t{1} << env_sites.size(); }

  std::vector<int> system_sites() const;

  void validate(int n_sites) const;
};

}  // namespace lecm
