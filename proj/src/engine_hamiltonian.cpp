#include <algorithm>
#include <array>
#include <atomic>
#include <bit>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lecm/engine.hpp"

namespace lecm {

namespace {

int g_threads = 0;

struct PackedBond {
  std::uint64_t mask;  // two flipped sites
  int a;               // lower site
  int b;               // upper site
  double j;
};

std::vector<PackedBond> pack(const std::vector<Bond>& bonds) {
  std::vector<PackedBond> packed;
  packed.reserve(bonds.size());
  for (const auto& bond : bonds) {
    PackedBond p;
    p.a = std::min(bond.a, bond.b);
    p.b = std::max(bond.a, bond.b);
    p.mask = (std::uint64_t{1} << p.a) | (std::uint64_t{1} << p.b);
    p.j = bond.j;
    packed.push_back(p);
  }
  std::sort(packed.begin(), packed.end(),
            [](const PackedBond& x, const PackedBond& y) { return x.a < y.a; });
  return packed;
}

// Rank change of a restricted-sector pattern under a two-site flip, using
// prefix popcounts pc[b] = set bits at positions < b. Positions p < q, exactly
// one of them set in s. Colex rank is sum of C(c_i, i) over set positions.
inline std::int64_t flip_rank_delta(std::uint64_t s, int p, int q, const int* pc) {
  std::int64_t delta = 0;
  const bool p_set = (s >> p) & 1;
  if (p_set) {
    // particle moves p -> q
    delta -= static_cast<std::int64_t>(binomial(p, pc[p] + 1));
    for (int b = p + 1; b < q; ++b)
      if ((s >> b) & 1)
        delta += static_cast<std::int64_t>(binomial(b, pc[b])) -
                 static_cast<std::int64_t>(binomial(b, pc[b] + 1));
    delta += static_cast<std::int64_t>(binomial(q, pc[q]));
  } else {
    // particle moves q -> p
    delta += static_cast<std::int64_t>(binomial(p, pc[p] + 1));
    for (int b = p + 1; b < q; ++b)
      if ((s >> b) & 1)
        delta += static_cast<std::int64_t>(binomial(b, pc[b] + 2)) -
                 static_cast<std::int64_t>(binomial(b, pc[b] + 1));
    delta -= static_cast<std::int64_t>(binomial(q, pc[q] + 1));
  }
  return delta;
}

}  // namespace

void set_engine_threads(int n) { g_threads = n > 0 ? n : 0; }

void apply_spin_pairs(const std::vector<Bond>& pairs, const BasisSector& sector,
                      const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(x.size()) != sector.size())
    fail(Errc::sector_mismatch, "vector does not match the sector dimension");
  y.resize(x.size());
  const auto packed = pack(pairs);
  const auto& states = sector.states();
  const std::int64_t dim = static_cast<std::int64_t>(states.size());
  const int n = sector.n_sites();
  const bool restricted = sector.restricted();
  const double* xv = x.data();
  double* yv = y.data();
  const PackedBond* bonds = packed.data();
  const int n_bonds = static_cast<int>(packed.size());

#ifdef _OPENMP
  const int default_threads = omp_get_max_threads();
  const int n_threads = g_threads > 0 ? g_threads : default_threads;
#pragma omp parallel for schedule(static) num_threads(n_threads)
#endif
  for (std::int64_t t = 0; t < dim; ++t) {
    const std::uint64_t s = states[t];
    int pc[64 + 1];
    if (restricted) {
      pc[0] = 0;
      for (int b = 0; b < n; ++b) pc[b + 1] = pc[b] + static_cast<int>((s >> b) & 1);
    }
    double diag = 0.0;
    double off = 0.0;
    for (int k = 0; k < n_bonds; ++k) {
      const PackedBond& bond = bonds[k];
      const bool ba = (s >> bond.a) & 1;
      const bool bb = (s >> bond.b) & 1;
      if (ba == bb) {
        diag += 0.25 * bond.j;
      } else {
        diag -= 0.25 * bond.j;
        std::int64_t src;
        if (restricted)
          src = t + flip_rank_delta(s, bond.a, bond.b, pc);
        else
          src = static_cast<std::int64_t>(s ^ bond.mask);
        off += 0.5 * bond.j * xv[src];
      }
    }
    yv[t] = diag * xv[t] + off;
  }
}

void apply_hamiltonian(const ModelParams& params, const BasisSector& sector,
                       const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  apply_spin_pairs(model_bonds(params), sector, x, y);
}

Eigen::VectorXd apply_hamiltonian(const ModelParams& params, const BasisSector& sector,
                                  const StateVector& v) {
  Eigen::VectorXd y;
  apply_hamiltonian(params, sector, v.real_amplitudes(), y);
  return y;
}

double total_spin_squared(const BasisSector& sector, const Eigen::VectorXd& x) {
  const int n = sector.n_sites();
  std::vector<Bond> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.push_back({a, b, 2.0});
  Eigen::VectorXd y;
  apply_spin_pairs(pairs, sector, x, y);
  return 0.75 * n * x.squaredNorm() + x.dot(y);
}

Eigen::MatrixXd dense_hamiltonian(const ModelParams& params, const BasisSector& sector) {
  if (sector.size() > 16384) fail(Errc::size_limit, "sector too large for a dense matrix");
  const auto bonds = model_bonds(params);
  const auto& states = sector.states();
  const std::size_t dim = states.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t t = 0; t < dim; ++t) {
    const std::uint64_t s = states[t];
    for (const auto& bond : bonds) {
      const bool ba = (s >> bond.a) & 1;
      const bool bb = (s >> bond.b) & 1;
      if (ba == bb) {
        h(t, t) += 0.25 * bond.j;
      } else {
        h(t, t) -= 0.25 * bond.j;
        const std::uint64_t flipped =
            s ^ ((std::uint64_t{1} << bond.a) | (std::uint64_t{1} << bond.b));
        h(sector.rank(flipped), t) += 0.5 * bond.j;
      }
    }
  }
  return h;
}

}  // namespace lecm
