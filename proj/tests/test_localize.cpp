#include <doctest.h>

#include <random>

#include "test_util.hpp"

using namespace lecm;
using lecm::testing::random_complex_state;
using lecm::testing::random_real_state;
using lecm::testing::random_support_basis;

TEST_SUITE_BEGIN("localize");

namespace {

MeasurementBasis hadamard_pair() {
  MeasurementBasis bsm;
  bsm.vectors.resize(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  bsm.vectors << Complex(s), Complex(s), Complex(s), Complex(-s);
  return bsm;
}

MeasurementBasis computational(int dim) {
  MeasurementBasis bsm;
  bsm.vectors = Eigen::MatrixXcd::Identity(dim, dim);
  return bsm;
}

// Direct assembly of each branch by projecting the full state; the independent
// oracle for localize.
double projection_oracle_average(const StateVector& psi, const Partition& partition,
                                 const MeasurementBasis& bsm) {
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(std::int64_t{1} << psi.n_sites());
  psi.for_each([&](std::uint64_t s, std::size_t, Complex amp) { full[s] += amp; });

  double average = 0.0;
  for (int i = 0; i < bsm.count(); ++i) {
    Eigen::VectorXcd branch = Eigen::VectorXcd::Zero(full.size());
    // project onto |xi_i><xi_i| acting on the env factor
    for (std::int64_t s = 0; s < full.size(); ++s) {
      std::uint32_t env_s = 0;
      for (std::size_t t = 0; t < partition.env_sites.size(); ++t)
        env_s |= static_cast<std::uint32_t>((s >> partition.env_sites[t]) & 1) << t;
      for (std::int64_t s2 = 0; s2 < full.size(); ++s2) {
        std::uint32_t env_s2 = 0;
        bool same_sys = true;
        for (std::size_t t = 0; t < partition.env_sites.size(); ++t)
          env_s2 |= static_cast<std::uint32_t>((s2 >> partition.env_sites[t]) & 1) << t;
        for (int site = 0; site < psi.n_sites(); ++site) {
          const bool is_env = std::find(partition.env_sites.begin(), partition.env_sites.end(),
                                        site) != partition.env_sites.end();
          if (!is_env && (((s >> site) & 1) != ((s2 >> site) & 1))) same_sys = false;
        }
        if (same_sys)
          branch[s] += bsm.vectors(env_s, i) * std::conj(bsm.vectors(env_s2, i)) * full[s2];
      }
    }
    const double p = branch.squaredNorm();
    if (p < 1e-12) continue;
    branch /= std::sqrt(p);
    // entropy across s1 | s2 of the branch (pure within the env ray)
    StateVector branch_state = StateVector::complex(psi.sector_ptr(), branch);
    const auto rho = reduced_density_matrix(branch_state, partition.s1_sites);
    average += p * von_neumann_entropy(rho);
  }
  return average;
}

}  // namespace

TEST_CASE("ghz in the rotated env basis yields bell branches") {
  auto ghz = make_full_state(3, {{0b000, 1.0}, {0b111, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  const auto loc = localize(ghz, partition, hadamard_pair());
  CHECK(loc.probabilities(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(loc.probabilities(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(loc.entropies(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(loc.entropies(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(loc.average == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("product states localize the same entropy in any basis") {
  // env qubit 2 in |+>, system pair entangled
  const double s = 1.0 / std::sqrt(2.0);
  auto psi = make_full_state(
      3, {{0b001, 0.5}, {0b010, 0.5}, {0b101, 0.5}, {0b110, 0.5}});  // bell(0,1) x plus(2)
  const Partition partition = Partition::make(3, {0}, {1});
  const auto computational_loc = localize(psi, partition, computational(2));
  const auto rotated_loc = localize(psi, partition, hadamard_pair());
  CHECK(computational_loc.average == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rotated_loc.average == doctest::Approx(computational_loc.average).epsilon(1e-12));
  (void)s;
}

TEST_CASE("random three-qubit states match the projection oracle") {
  for (int trial = 0; trial < 8; ++trial) {
    const auto psi =
        trial % 2 ? random_complex_state(3, 600 + trial) : random_real_state(3, 500 + trial);
    const Partition partition = Partition::make(3, {0}, {1});
    const auto bsm = random_support_basis(psi, partition, 700 + trial, trial % 2);
    const auto loc = localize(psi, partition, bsm);
    CHECK(loc.average ==
          doctest::Approx(projection_oracle_average(psi, partition, bsm)).epsilon(1e-10));
  }
}

TEST_CASE("probabilities close to one and stay nonnegative") {
  for (int trial = 0; trial < 6; ++trial) {
    const auto psi = random_real_state(5, 90 + trial);
    const Partition partition = Partition::make(5, {0, 2}, {4});
    const auto bsm = random_support_basis(psi, partition, 70 + trial);
    const auto loc = localize(psi, partition, bsm);
    CHECK(std::abs(loc.probabilities.sum() - 1.0) < 1e-10);
    for (Eigen::Index i = 0; i < loc.probabilities.size(); ++i)
      CHECK(loc.probabilities(i) >= -1e-12);
    for (Eigen::Index i = 0; i < loc.entropies.size(); ++i) {
      CHECK(loc.entropies(i) >= 0.0);
      CHECK(loc.entropies(i) <= 1.0 + 1e-12);  // log2 min(d1, d2) = 1 here
    }
  }
}

TEST_CASE("basis gauge changes leave the distribution alone") {
  const auto psi = random_real_state(4, 17);
  const Partition partition = Partition::make(4, {0}, {1});
  const auto bsm = random_support_basis(psi, partition, 18);
  const auto loc = localize(psi, partition, bsm);

  MeasurementBasis shuffled = bsm;
  const int count = bsm.count();
  std::vector<int> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(19);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> angle(0.0, 6.28);
  for (int c = 0; c < count; ++c)
    shuffled.vectors.col(c) =
        bsm.vectors.col(perm[c]) * std::exp(Complex(0.0, angle(rng)));
  const auto shuffled_loc = localize(psi, partition, shuffled);

  CHECK(shuffled_loc.average == doctest::Approx(loc.average).epsilon(1e-12));
  for (int c = 0; c < count; ++c) {
    CHECK(shuffled_loc.probabilities(c) ==
          doctest::Approx(loc.probabilities(perm[c])).epsilon(1e-10));
    CHECK(shuffled_loc.entropies(c) == doctest::Approx(loc.entropies(perm[c])).epsilon(1e-10));
  }
}

TEST_CASE("orthonormality and coverage are enforced") {
  const auto psi = random_real_state(3, 3);
  const Partition partition = Partition::make(3, {0}, {1});
  MeasurementBasis skewed;
  skewed.vectors.resize(2, 2);
  skewed.vectors << Complex(1.0), Complex(0.5), Complex(0.0), Complex(1.0);
  CHECK_THROWS_AS(localize(psi, partition, skewed), Error);

  MeasurementBasis partial;
  partial.vectors = Eigen::MatrixXcd::Identity(2, 1);
  CHECK_THROWS_AS(localize(psi, partition, partial), Error);  // support not covered
}

TEST_CASE("vanishing branches are kept but flagged") {
  // state supported on env |0> only, basis includes env |1>
  auto psi = make_full_state(3, {{0b001, 1.0}, {0b010, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  const auto loc = localize(psi, partition, computational(2));
  REQUIRE(loc.probabilities.size() == 2);
  CHECK(loc.active[0] == 1);
  CHECK(loc.active[1] == 0);
  CHECK(loc.probabilities(1) == doctest::Approx(0.0));
  CHECK(loc.entropies(1) == 0.0);
}

TEST_SUITE_END();
