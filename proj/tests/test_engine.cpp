#include <doctest.h>

#include <random>

#include "lecm/engine.hpp"
#include "test_util.hpp"

using namespace lecm;

TEST_SUITE_BEGIN("engine");

namespace {

Eigen::VectorXd random_sector_vector(const BasisSector& sector, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(sector.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
  v.normalize();
  return v;
}

}  // namespace

TEST_CASE("two-site singlet is an eigenvector at -3/4") {
  const ModelParams params{2, 1.0, 0.0, Boundary::open, ChainLayout::single};
  auto sector = BasisSector::magnetization(2, 0);
  Eigen::VectorXd singlet(2);
  singlet << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  Eigen::VectorXd h_singlet;
  apply_hamiltonian(params, *sector, singlet, h_singlet);
  CHECK((h_singlet + 0.75 * singlet).norm() < 1e-14);
}

TEST_CASE("operator is symmetric and linear") {
  const ModelParams params{8, 1.0, 0.3, Boundary::periodic, ChainLayout::single};
  auto sector = BasisSector::magnetization(8, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd u = random_sector_vector(*sector, 2 * trial);
    const Eigen::VectorXd v = random_sector_vector(*sector, 2 * trial + 1);
    Eigen::VectorXd hu, hv;
    apply_hamiltonian(params, *sector, u, hu);
    apply_hamiltonian(params, *sector, v, hv);
    CHECK(std::abs(u.dot(hv) - hu.dot(v)) < 1e-12);
  }
  const Eigen::VectorXd u = random_sector_vector(*sector, 11);
  const Eigen::VectorXd v = random_sector_vector(*sector, 13);
  Eigen::VectorXd hu, hv, hsum;
  apply_hamiltonian(params, *sector, u, hu);
  apply_hamiltonian(params, *sector, v, hv);
  Eigen::VectorXd combo = 0.3 * u + 1.7 * v;
  apply_hamiltonian(params, *sector, combo, hsum);
  CHECK((hsum - 0.3 * hu - 1.7 * hv).norm() < 1e-12);
}

TEST_CASE("matrix-free application agrees with the dense build") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 7);
    const int two_sz = (n % 2 == 0) ? ((rng() % 2) ? 0 : 2) : 1;
    const ModelParams params{n, 1.0, 0.15 * static_cast<double>(rng() % 5),
                             (rng() % 2) ? Boundary::periodic : Boundary::open,
                             ChainLayout::single};
    auto sector = BasisSector::magnetization(n, two_sz);
    const Eigen::MatrixXd dense = dense_hamiltonian(params, *sector);
    const Eigen::VectorXd v = random_sector_vector(*sector, trial);
    Eigen::VectorXd hv;
    apply_hamiltonian(params, *sector, v, hv);
    CHECK((dense * v - hv).norm() < 1e-11);
    CHECK((dense - dense.transpose()).norm() < 1e-12);
  }
}

TEST_CASE("six-site ring at the dimer point") {
  const ModelParams params{6, 1.0, 0.5, Boundary::periodic, ChainLayout::single};
  auto gs = dense_ground_state(params, BasisSector::magnetization(6, 0));
  CHECK(gs.energy == doctest::Approx(-2.25).epsilon(1e-12));
}

TEST_CASE("lanczos matches the dense oracle across sizes and couplings") {
  for (int n : {2, 3, 4, 5, 6, 8, 10}) {
    for (double j2 : {0.0, 0.25, 0.5, 1.0}) {
      for (Boundary boundary : {Boundary::open, Boundary::periodic}) {
        const ModelParams params{n, 1.0, j2, boundary, ChainLayout::single};
        auto sector = BasisSector::magnetization(n, n % 2);
        const auto dense = dense_ground_state(params, sector);
        const auto iterative = ground_state(params, sector);
        CAPTURE(n);
        CAPTURE(j2);
        CHECK(std::abs(dense.energy - iterative.energy) < 1e-10);
        CHECK(iterative.residual_norm <=
              1e-10 * std::max(1.0, std::abs(iterative.energy)));
      }
    }
  }
}

TEST_CASE("twelve-site ring at the dimer point") {
  const ModelParams params{12, 1.0, 0.5, Boundary::periodic, ChainLayout::single};
  auto sector = BasisSector::magnetization(12, 0);
  const auto gs = ground_state(params, sector);
  CHECK(std::abs(gs.energy + 4.5) < 1e-9);
  const auto dense = dense_ground_state(params, sector);
  CHECK(std::abs(dense.energy - gs.energy) < 1e-10);
}

TEST_CASE("fixed seeds reproduce the energy bit for bit") {
  const ModelParams params{10, 1.0, 0.4, Boundary::open, ChainLayout::single};
  auto sector = BasisSector::magnetization(10, 0);
  LanczosOptions options;
  options.seed = 1234;
  const auto first = ground_state(params, sector, options);
  const auto second = ground_state(params, sector, options);
  CHECK(std::abs(first.energy - second.energy) <= 1e-14);
}

TEST_CASE("iteration cap raises a convergence error") {
  const ModelParams params{12, 1.0, 0.0, Boundary::periodic, ChainLayout::single};
  LanczosOptions options;
  options.max_iters = 3;
  CHECK_THROWS_AS(ground_state(params, BasisSector::magnetization(12, 0), options), Error);
}

TEST_CASE("even antiferromagnetic chains settle into a total singlet") {
  for (int n : {8, 10, 12}) {
    for (double j2 : {0.0, 0.25}) {
      const ModelParams params{n, 1.0, j2, Boundary::open, ChainLayout::single};
      auto sector = BasisSector::magnetization(n, 0);
      const auto gs = ground_state(params, sector);
      CHECK(total_spin_squared(*sector, gs.vector.real_amplitudes()) < 1e-8);
      // magnetized sectors sit strictly higher
      const auto raised = ground_state(params, BasisSector::magnetization(n, 2));
      CHECK(raised.energy > gs.energy + 1e-8);
    }
  }
}

TEST_CASE("decoupled layout composes the chain ground states") {
  const ModelParams params{8, 1.0, 0.2, Boundary::open, ChainLayout::two_decoupled};
  auto sector = BasisSector::magnetization(8, 0);
  const auto composed = ground_state(params, sector);
  const auto dense = dense_ground_state(params, sector);
  CHECK(std::abs(composed.energy - dense.energy) < 1e-10);
  CHECK(composed.residual_norm <= 1e-10 * std::max(1.0, std::abs(composed.energy)));

  const ModelParams chain{4, 1.0, 0.2, Boundary::open, ChainLayout::single};
  const auto half = ground_state(chain, BasisSector::magnetization(4, 0));
  CHECK(std::abs(composed.energy - 2.0 * half.energy) < 1e-10);
}

TEST_CASE("worker count does not change the application") {
  const ModelParams params{10, 1.0, 0.5, Boundary::periodic, ChainLayout::single};
  auto sector = BasisSector::magnetization(10, 0);
  const Eigen::VectorXd v = random_sector_vector(*sector, 5);
  Eigen::VectorXd serial, threaded;
  set_engine_threads(1);
  apply_hamiltonian(params, *sector, v, serial);
  set_engine_threads(2);
  apply_hamiltonian(params, *sector, v, threaded);
  set_engine_threads(0);
  CHECK((serial - threaded).norm() == 0.0);
}

TEST_SUITE_END();
