#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lecm/errors.hpp"

namespace lecm {

enum class Boundary { open, periodic };
enum class ChainLayout { single, two_decoupled };

/// j1-j2 Heisenberg chain parameters. two_decoupled means two disjoint chains of
/// n_sites/2 each (sites [0, n/2) and [n/2, n)) with no inter-chain bonds.
struct ModelParams {
  int n_sites = 0;
  double j1 = 1.0;
  double j2 = 0.0;
  Boundary boundary = Boundary::open;
  ChainLayout layout = ChainLayout::single;

  void validate() const;
};

struct Bond {
  int a = 0;
  int b = 0;
  double j = 0.0;
};

/// Exchange bonds of the model, deduplicated over unordered site pairs.
std::vector<Bond> model_bonds(const ModelParams& params);

/// Mirror-symmetric site pair at distance r on an open chain of n sites
/// (a + b = n - 1); empty when no such placement exists for this parity.
std::optional<std::pair<int, int>> symmetric_pair(int n_sites, int r);

/// Near-centered fallback placement for parities with no exact mirror pair.
std::pair<int, int> centered_pair(int n_sites, int r);

}  // namespace lecm
