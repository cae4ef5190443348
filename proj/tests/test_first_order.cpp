#include <doctest.h>

#include <random>

#include "lecm/first_order.hpp"
#include "test_util.hpp"

using namespace lecm;
using lecm::testing::random_complex_state;
using lecm::testing::random_real_state;
using lecm::testing::random_support_basis;

TEST_SUITE_BEGIN("first_order");

TEST_CASE("zero rotation leaves the basis untouched") {
  const auto psi = random_real_state(3, 1);
  const Partition partition = Partition::make(3, {0}, {1});
  const auto bsm = random_support_basis(psi, partition, 2);
  const auto same = elementary_transform(bsm, {0, 1, 0.0, false});
  CHECK((same.vectors - bsm.vectors).norm() == 0.0);
}

TEST_CASE("opposite rotations cancel") {
  const auto psi = random_real_state(4, 5);
  const Partition partition = Partition::make(4, {0}, {1});
  const auto bsm = random_support_basis(psi, partition, 6);
  for (bool phase : {false, true}) {
    const auto there = elementary_transform(bsm, {0, 2, 0.03, phase});
    const auto back = elementary_transform(there, {0, 2, -0.03, phase});
    CHECK((back.vectors - bsm.vectors).norm() < 1e-12);
  }
}

TEST_CASE("rotations preserve orthonormality") {
  std::mt19937_64 rng(31);
  const auto psi = random_real_state(5, 30);
  const Partition partition = Partition::make(5, {0, 1}, {2});
  auto bsm = random_support_basis(psi, partition, 32);
  for (int step = 0; step < 25; ++step) {
    const int count = bsm.count();
    const int i = static_cast<int>(rng() % count);
    int j = static_cast<int>(rng() % count);
    if (j == i) j = (j + 1) % count;
    const double eps = 0.09 * (static_cast<double>(rng() % 1000) / 1000.0 - 0.5);
    bsm = elementary_transform(bsm, {i, j, eps, step % 2 == 0});
    CHECK(bsm.gram_defect() < 1e-12);
  }
}

TEST_CASE("rotation magnitude and admissibility guards") {
  const auto psi = random_real_state(3, 7);
  const Partition partition = Partition::make(3, {0}, {1});
  const auto bsm = random_support_basis(psi, partition, 8);
  CHECK_THROWS_AS(elementary_transform(bsm, {0, 0, 0.01, false}), Error);
  CHECK_THROWS_AS(elementary_transform(bsm, {0, 1, 0.5, false}), Error);

  Eigen::VectorXd probs(2);
  probs << 0.7, 0.0;
  CHECK_THROWS_AS(elementary_transform(bsm, {0, 1, 0.01, false}, &probs), Error);
  probs << 0.7, 0.3;
  CHECK_NOTHROW(elementary_transform(bsm, {0, 1, 0.01, false}, &probs));
}

TEST_CASE("couplings vanish in the eigenbasis and for the maximally mixed environment") {
  const auto psi = random_real_state(4, 44);
  const Partition partition = Partition::make(4, {0}, {1});
  const auto rho_env = reduced_density_matrix(psi, partition.env_sites);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_env.m);
  MeasurementBasis eigen_bsm;
  eigen_bsm.vectors = solver.eigenvectors();
  for (int i = 0; i < eigen_bsm.count(); ++i)
    for (int j = i + 1; j < eigen_bsm.count(); ++j)
      CHECK(std::abs(coupling_k(rho_env, eigen_bsm, i, j)) < 1e-12);

  DensityMatrix mixed{0.25 * Eigen::MatrixXcd::Identity(4, 4)};
  const auto bsm = random_support_basis(psi, partition, 45);
  for (int i = 0; i < bsm.count(); ++i)
    for (int j = i + 1; j < bsm.count(); ++j)
      CHECK(std::abs(coupling_k(mixed, bsm, i, j)) < 1e-12);
}

TEST_CASE("couplings unfold to twice the real part of the matrix element") {
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = random_complex_state(4, 50 + trial);
    const Partition partition = Partition::make(4, {0}, {1});
    const auto rho_env = reduced_density_matrix(psi, partition.env_sites);
    MeasurementBasis computational;
    computational.vectors = Eigen::MatrixXcd::Identity(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        CHECK(coupling_k(rho_env, computational, i, j) ==
              doctest::Approx(2.0 * rho_env.m(i, j).real()).epsilon(1e-12));
        // symmetric under swapping the pair
        CHECK(coupling_k(rho_env, computational, i, j) ==
              doctest::Approx(coupling_k(rho_env, computational, j, i)).epsilon(1e-12));
      }
  }
}

TEST_CASE("first-order shifts are traceless") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto psi = (trial % 2) ? random_complex_state(4, 900 + trial)
                                 : random_real_state(4, 800 + trial);
    const Partition partition = Partition::make(4, {0}, {1});
    const auto bsm = random_support_basis(psi, partition, 1000 + trial, trial % 2);
    const auto loc = localize(psi, partition, bsm);
    const auto rho_env = reduced_density_matrix(psi, partition.env_sites);
    const auto data = first_order_data(loc, rho_env, bsm, 0, 1, trial % 3 == 0);

    const Eigen::MatrixXcd& q = loc.branches[0];
    const Eigen::MatrixXcd& r = loc.branches[1];
    const Eigen::MatrixXcd shift_ij =
        2.0 * data.a_ij * (q * q.adjoint()) +
        (data.b_ij * (r * q.adjoint()) + std::conj(data.b_ij) * (q * r.adjoint()));
    const Eigen::MatrixXcd shift_ji =
        2.0 * data.a_ji * (r * r.adjoint()) +
        (data.b_ji * (q * r.adjoint()) + std::conj(data.b_ji) * (r * q.adjoint()));
    CHECK(std::abs(shift_ij.trace()) < 1e-10);
    CHECK(std::abs(shift_ji.trace()) < 1e-10);
  }
}

TEST_CASE("a pair of vanishing probabilities predicts no change") {
  auto psi = make_full_state(4, {{0b0001, 1.0}, {0b0010, 1.0}});  // env {2,3} stuck in 00
  const Partition partition = Partition::make(4, {0}, {1});
  MeasurementBasis computational;
  computational.vectors = Eigen::MatrixXcd::Identity(4, 4);
  const auto loc = localize(psi, partition, computational);
  const auto rho_env = reduced_density_matrix(psi, partition.env_sites);
  const auto data = first_order_data(loc, rho_env, computational, 1, 2, false);
  CHECK(data.sbar1 == 0.0);
  CHECK(data.k_ij == 0.0);
  // one vanishing, one finite is ruled out
  CHECK_THROWS_AS(first_order_data(loc, rho_env, computational, 0, 1, false), Error);
}

TEST_CASE("slopes match finite differences with second-order defects") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const bool complex_state = trial % 3 == 1;
    const bool phase = trial % 3 == 2;
    const auto psi = complex_state || phase ? random_complex_state(3, 2000 + trial)
                                            : random_real_state(3, 2100 + trial);
    const Partition partition = Partition::make(3, {0}, {1});
    const auto bsm = random_support_basis(psi, partition, 2200 + trial, complex_state || phase);
    const auto check =
        finite_difference_check(psi, partition, bsm, {0, 1, 0.0, phase}, {1e-2, 1e-3, 1e-4});
    if (std::abs(check.sbar1) < 1e-9) continue;  // flat directions carry no signal
    CHECK(check.slope >= 1.9);
  }
}

TEST_CASE("finite differences converge to the slope itself") {
  const auto psi = random_real_state(3, 555);
  const Partition partition = Partition::make(3, {0}, {1});
  const auto bsm = random_support_basis(psi, partition, 556);
  const auto loc = localize(psi, partition, bsm);
  const auto rho_env = reduced_density_matrix(psi, partition.env_sites);
  const auto data = first_order_data(loc, rho_env, bsm, 0, 1, false);

  double previous_error = std::numeric_limits<double>::infinity();
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const auto rotated = elementary_transform(bsm, {0, 1, eps, false});
    const double slope_estimate = (localize(psi, partition, rotated).average - loc.average) / eps;
    const double error = std::abs(slope_estimate - data.sbar1);
    CHECK(error < previous_error);
    previous_error = error;
  }
}

TEST_CASE("zero epsilon rows report a zero defect") {
  const auto psi = random_real_state(3, 42);
  const Partition partition = Partition::make(3, {0}, {1});
  const auto bsm = random_support_basis(psi, partition, 43);
  const auto check = finite_difference_check(psi, partition, bsm, {0, 1, 0.0, false}, {0.0, 1e-3});
  CHECK(check.rows[0].defect == 0.0);
}

TEST_CASE("eigenbasis slopes reduce to the trace-condition residual") {
  for (int trial = 0; trial < 6; ++trial) {
    const auto psi = random_real_state(4, 3000 + trial);
    const Partition partition = Partition::make(4, {0}, {1});
    const auto result = canonical_localization(psi, partition);
    MeasurementBasis bsm;
    bsm.vectors = result.decomposition.env_vectors;
    const auto loc = localize(psi, partition, bsm);
    const auto rho_env = reduced_density_matrix(psi, partition.env_sites);
    for (int i = 0; i < bsm.count(); ++i)
      for (int j = i + 1; j < bsm.count(); ++j) {
        const auto data = first_order_data(loc, rho_env, bsm, i, j, false);
        CHECK(std::abs(data.k_ij) < 1e-10);
        const double residual = reduced_condition_residual(loc, i, j);
        const double prefactor =
            2.0 * std::sqrt(loc.probabilities(i) * loc.probabilities(j));
        CHECK(std::abs(std::abs(data.sbar1) - prefactor * residual) < 1e-9);
      }
  }
}

TEST_CASE("stationarity reports match their finite differences") {
  auto ghz = make_full_state(3, {{0b000, 1.0}, {0b111, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  MeasurementBasis computational;
  computational.vectors = Eigen::MatrixXcd::Identity(2, 2);
  const auto report = optimality_residual(ghz, partition, computational);
  CHECK(report.stationary);
  CHECK(report.max_abs_residual < 1e-10);
  // directional finite differences confirm the flat point; the entropy picks up
  // an eps^2 log(1/eps) tail near the pure branches
  for (double eps : {1e-3, 1e-4}) {
    const auto rotated = elementary_transform(computational, {0, 1, eps, false});
    const double moved = localize(ghz, partition, rotated).average;
    CHECK(std::abs(moved - 0.0) < 10 * eps * eps * std::log2(1.0 / eps) + 1e-12);
  }

  const auto psi = random_real_state(4, 71);
  const Partition random_partition = Partition::make(4, {0}, {1});
  const auto bsm = random_support_basis(psi, random_partition, 72);
  const auto random_report = optimality_residual(psi, random_partition, bsm);
  const auto loc = localize(psi, random_partition, bsm);
  for (int i = 0; i < bsm.count(); ++i)
    for (int j = i + 1; j < bsm.count(); ++j) {
      const double eps = 1e-5;
      const auto rotated = elementary_transform(bsm, {i, j, eps, false});
      const double fd =
          (localize(psi, random_partition, rotated).average - loc.average) / eps;
      CHECK(random_report.pair_slopes(i, j) == doctest::Approx(fd).epsilon(1e-4));
      CHECK(random_report.pair_slopes(j, i) ==
            doctest::Approx(-random_report.pair_slopes(i, j)).epsilon(1e-12));
    }
}

TEST_CASE("w state is stationary in its canonical basis") {
  auto w = make_full_state(3, {{0b001, 1.0}, {0b010, 1.0}, {0b100, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  const auto result = canonical_localization(w, partition);
  MeasurementBasis bsm;
  bsm.vectors = result.decomposition.env_vectors;
  const auto report = optimality_residual(w, partition, bsm);
  CHECK(report.max_abs_residual < 1e-10);
  CHECK(report.stationary);
}

TEST_SUITE_END();
