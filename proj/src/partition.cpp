#include "lecm/partition.hpp"

#include <algorithm>
#include <set>

namespace lecm {

Partition Partition::make(int n_sites, std::vector<int> s1, std::vector<int> s2) {
  Partition p;
  p.s1_sites = std::move(s1);
  p.s2_sites = std::move(s2);
  std::set<int> used(p.s1_sites.begin(), p.s1_sites.end());
  used.insert(p.s2_sites.begin(), p.s2_sites.end());
  for (int site = 0; site < n_sites; ++site)
    if (!used.count(site)) p.env_sites.push_back(site);
  p.validate(n_sites);
  return p;
}

std::vector<int> Partition::system_sites() const {
  std::vector<int> sites = s1_sites;
  sites.insert(sites.end(), s2_sites.begin(), s2_sites.end());
  return sites;
}

void Partition::validate(int n_sites) const {
  if (s1_sites.empty() || s2_sites.empty())
    fail(Errc::invalid_argument, "both studied parts must be nonempty");
  std::set<int> seen;
  auto check = [&](const std::vector<int>& sites) {
    for (int site : sites) {
      if (site < 0 || site >= n_sites) fail(Errc::invalid_argument, "site index out of range");
      if (!seen.insert(site).second) fail(Errc::invalid_argument, "site listed twice");
    }
  };
  check(s1_sites);
  check(s2_sites);
  check(env_sites);
  if (static_cast<int>(seen.size()) != n_sites)
    fail(Errc::invalid_argument, "partition does not cover every site");
}

}  // namespace lecm
