#include <doctest.h>

#include "lecm/schmidt.hpp"
#include "test_util.hpp"

using namespace lecm;
using lecm::testing::random_complex_state;
using lecm::testing::random_real_state;

TEST_SUITE_BEGIN("schmidt");

namespace {

Partition split_1_1_rest(int n_sites) { return Partition::make(n_sites, {0}, {1}); }

// || psi - sum sqrt(lambda) sys x env || over the coefficient matrix
double reconstruction_error(const StateVector& psi, const Partition& partition,
                            const SchmidtDecomposition& sd) {
  const Eigen::MatrixXcd m = coefficient_matrix(psi, partition);
  Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < sd.lambdas.size(); ++i)
    rebuilt += std::sqrt(std::max(sd.lambdas(i), 0.0)) * sd.sys_vectors.col(i) *
               sd.env_vectors.col(i).transpose();
  return (m - rebuilt).norm();
}

}  // namespace

TEST_CASE("partitions need both studied parts") {
  CHECK_THROWS_AS(Partition::make(2, {0}, {}), Error);
  CHECK_THROWS_AS(Partition::make(3, {0}, {0}), Error);
  CHECK_THROWS_AS(Partition::make(3, {0}, {5}), Error);
}

TEST_CASE("bell pair across one env site") {
  auto bell = make_full_state(3, {{0b001, 1.0}, {0b110, 1.0}});
  const Partition partition = split_1_1_rest(3);
  const auto sd = schmidt_decompose(bell, partition);
  REQUIRE(sd.lambdas.size() >= 2);
  CHECK(sd.lambdas(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sd.lambdas(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sd.schmidt_number == 2);
}

TEST_CASE("product states have one schmidt branch") {
  auto product = make_full_state(4, {{0b0000, 1.0}});
  const auto sd = schmidt_decompose(product, split_1_1_rest(4));
  CHECK(sd.schmidt_number == 1);
  CHECK(sd.lambdas(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random states reconstruct and stay normalized") {
  for (int trial = 0; trial < 4; ++trial) {
    const auto psi =
        trial % 2 ? random_complex_state(10, 60 + trial) : random_real_state(10, 50 + trial);
    const Partition partition = Partition::make(10, {0, 2}, {5});
    const auto sd = schmidt_decompose(psi, partition);
    CHECK(sd.lambdas.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reconstruction_error(psi, partition, sd) < 1e-10);
    const Eigen::MatrixXcd sys_gram = sd.sys_vectors.adjoint() * sd.sys_vectors;
    const Eigen::MatrixXcd env_gram = sd.env_vectors.adjoint() * sd.env_vectors;
    CHECK((sys_gram - Eigen::MatrixXcd::Identity(sys_gram.rows(), sys_gram.cols())).norm() < 1e-12);
    CHECK((env_gram - Eigen::MatrixXcd::Identity(env_gram.rows(), env_gram.cols())).norm() < 1e-12);
  }
}

TEST_CASE("squared singular values match both reduced spectra") {
  const auto psi = random_real_state(9, 33);
  const Partition partition = Partition::make(9, {1, 3}, {6, 7});
  const auto sd = schmidt_decompose(psi, partition);
  const auto rho_sys = reduced_density_matrix(psi, partition.system_sites());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_sys.m, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < sd.lambdas.size(); ++i) {
    const double from_rho = solver.eigenvalues()(solver.eigenvalues().size() - 1 - i);
    if (sd.lambdas(i) > 1e-12 || from_rho > 1e-12)
      CHECK(std::abs(sd.lambdas(i) - from_rho) < 1e-10);
  }
}

TEST_CASE("an empty environment is rejected") {
  auto bell = make_full_state(2, {{0b01, 1.0}, {0b10, 1.0}});
  const Partition partition = Partition::make(2, {0}, {1});
  CHECK_THROWS_AS(schmidt_decompose(bell, partition), Error);
}

TEST_SUITE_END();
