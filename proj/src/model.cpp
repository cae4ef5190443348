#include "lecm/model.hpp"

#include <cmath>
#include <map>

namespace lecm {

void ModelParams::validate() const {
  if (n_sites < 2) fail(Errc::invalid_argument, "n_sites must be >= 2");
  if (layout == ChainLayout::two_decoupled && n_sites % 2 != 0)
    fail(Errc::invalid_argument, "two_decoupled layout requires an even n_sites");
  if (!std::isfinite(j1) || !std::isfinite(j2))
    fail(Errc::invalid_argument, "couplings must be finite");
}

namespace {

// Couplings accumulate per unordered pair, so periodic wrap terms that revisit
// a pair (n = 2 nearest-neighbor, n = 4 next-nearest) add up as in the ring sum.
void accumulate_chain_bonds(int first, int n, double j1, double j2, Boundary boundary,
                            std::map<std::pair<int, int>, double>& coupling) {
  auto add = [&](int a, int b, double j) {
    if (j == 0.0 || a == b) return;
    if (a > b) std::swap(a, b);
    coupling[{first + a, first + b}] += j;
  };
  const bool wrap = boundary == Boundary::periodic;
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n)
      add(i, i + 1, j1);
    else if (wrap)
      add(i, (i + 1) % n, j1);
    if (i + 2 < n)
      add(i, i + 2, j2);
    else if (wrap)
      add(i, (i + 2) % n, j2);
  }
}

}  // namespace

std::vector<Bond> model_bonds(const ModelParams& params) {
  params.validate();
  std::map<std::pair<int, int>, double> coupling;
  if (params.layout == ChainLayout::single) {
    accumulate_chain_bonds(0, params.n_sites, params.j1, params.j2, params.boundary, coupling);
  } else {
    const int half = params.n_sites / 2;
    accumulate_chain_bonds(0, half, params.j1, params.j2, params.boundary, coupling);
    accumulate_chain_bonds(half, half, params.j1, params.j2, params.boundary, coupling);
  }
  std::vector<Bond> bonds;
  bonds.reserve(coupling.size());
  for (const auto& [pair, j] : coupling) bonds.push_back({pair.first, pair.second, j});
  return bonds;
}

std::optional<std::pair<int, int>> symmetric_pair(int n_sites, int r) {
  if (r < 1 || r >= n_sites) return std::nullopt;
  if ((n_sites - 1 - r) % 2 != 0) return std::nullopt;
  const int a = (n_sites - 1 - r) / 2;
  return std::make_pair(a, a + r);
}

std::pair<int, int> centered_pair(int n_sites, int r) {
  if (r < 1 || r >= n_sites) fail(Errc::invalid_argument, "distance out of range");
  const int mid = (n_sites + 1) / 2;
  int a = mid - (r + 1) / 2;
  int b = a + r;
  if (a < 0) { a = 0; b = r; }
  if (b >= n_sites) { b = n_sites - 1; a = b - r; }
  return {a, b};
}

}  // namespace lecm
