#include <doctest.h>

#include "lecm/engine.hpp"
#include "lecm/optimizer.hpp"
#include "test_util.hpp"

using namespace lecm;
using lecm::testing::random_real_state;
using lecm::testing::random_support_basis;

TEST_SUITE_BEGIN("optimizer");

TEST_CASE("ghz ascent recovers the bell point from a perturbed start") {
  auto ghz = make_full_state(3, {{0b000, 1.0}, {0b111, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  MeasurementBasis start;
  start.vectors = Eigen::MatrixXcd::Identity(2, 2);
  start = elementary_transform(start, {0, 1, 0.05, false});

  const auto outcome = optimize_bsm(ghz, partition, start);
  CHECK(outcome.stationary);
  CHECK(outcome.localization.average == doctest::Approx(1.0).epsilon(1e-6));
  for (std::size_t i = 1; i < outcome.trajectory.size(); ++i)
    CHECK(outcome.trajectory[i] >= outcome.trajectory[i - 1] - 1e-12);
}

TEST_CASE("ghz descent reaches an aligned basis") {
  auto ghz = make_full_state(3, {{0b000, 1.0}, {0b111, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  MeasurementBasis start;
  start.vectors = Eigen::MatrixXcd::Identity(2, 2);
  start = elementary_transform(start, {0, 1, 0.07, false});

  OptimizerConfig config;
  config.direction = OptimizeDirection::minimize;
  const auto outcome = optimize_bsm(ghz, partition, start, config);
  // the aligned point itself sits behind numerically pure branches, so the
  // search stops at the evaluable boundary with an essentially zero average
  CHECK(std::abs(outcome.localization.average) < 1e-6);
  for (std::size_t i = 1; i < outcome.trajectory.size(); ++i)
    CHECK(outcome.trajectory[i] <= outcome.trajectory[i - 1] + 1e-12);
}

TEST_CASE("product states terminate immediately") {
  auto product = make_full_state(3, {{0b000, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  MeasurementBasis support;
  support.vectors = Eigen::MatrixXcd::Zero(2, 1);
  support.vectors(0, 0) = 1.0;
  const auto outcome = optimize_bsm(product, partition, support);
  CHECK(outcome.stationary);
  CHECK(outcome.iterations == 0);
  CHECK(outcome.localization.average == doctest::Approx(0.0));
}

TEST_CASE("mixed finite and vanishing probabilities stall") {
  auto product = make_full_state(3, {{0b000, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  MeasurementBasis with_kernel;
  with_kernel.vectors = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(optimize_bsm(product, partition, with_kernel), Error);
}

TEST_CASE("w state from the canonical start stays at the canonical value") {
  auto w = make_full_state(3, {{0b001, 1.0}, {0b010, 1.0}, {0b100, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  const auto start = canonical_bsm(w, partition);
  const auto outcome = optimize_bsm(w, partition, start);
  CHECK(outcome.stationary);
  CHECK(outcome.localization.average >= 2.0 / 3.0 - 1e-12);
  CHECK(outcome.iterations == 0);
}

TEST_CASE("maximized states dominate the random oracle") {
  for (int trial = 0; trial < 12; ++trial) {
    const int n = trial % 2 ? 4 : 3;
    const auto psi = random_real_state(n, 4000 + trial);
    const Partition partition = Partition::make(n, {0}, {1});
    const auto start = random_support_basis(psi, partition, 4100 + trial);
    const auto outcome = optimize_bsm(psi, partition, start);
    const auto oracle = random_bsm_oracle(psi, partition, 10000, 4200 + trial);
    CHECK(outcome.localization.average >= oracle.best_max - 1e-6);
  }
}

TEST_CASE("oracle bounds on reference states") {
  auto ghz = make_full_state(3, {{0b000, 1.0}, {0b111, 1.0}});
  const Partition partition = Partition::make(3, {0}, {1});
  const auto oracle = random_bsm_oracle(ghz, partition, 1000, 99);
  CHECK(oracle.best_max >= 0.99);
  CHECK(oracle.best_max <= 1.0 + 1e-12);
  CHECK(oracle.best_min >= -1e-12);
  CHECK(oracle.best_min <= 0.05);

  auto product = make_full_state(3, {{0b000, 1.0}});
  const auto flat = random_bsm_oracle(product, partition, 50, 7);
  CHECK(flat.best_max == doctest::Approx(flat.best_min));
}

TEST_CASE("oracle is reproducible and guarded") {
  const auto psi = random_real_state(4, 12);
  const Partition partition = Partition::make(4, {0}, {1});
  const auto a = random_bsm_oracle(psi, partition, 200, 5);
  const auto b = random_bsm_oracle(psi, partition, 200, 5);
  CHECK(a.best_max == b.best_max);
  CHECK(a.best_min == b.best_min);

  const auto big = random_real_state(7, 13);
  const Partition wide = Partition::make(7, {0}, {1});  // 5 env sites -> dimension 32
  CHECK_THROWS_AS(random_bsm_oracle(big, wide, 10, 1), Error);
}

TEST_CASE("iteration caps flag a non-stationary exit") {
  const auto psi = random_real_state(4, 21);
  const Partition partition = Partition::make(4, {0}, {1});
  const auto start = random_support_basis(psi, partition, 22);
  OptimizerConfig config;
  config.max_iters = 1;
  const auto outcome = optimize_bsm(psi, partition, start, config);
  // a single step from a random basis cannot be stationary at 1e-8
  CHECK_FALSE(outcome.stationary);
}

TEST_CASE("converged optimizers pass an independent finite-difference audit") {
  const auto psi = random_real_state(4, 31);
  const Partition partition = Partition::make(4, {0}, {1});
  const auto start = random_support_basis(psi, partition, 32);
  const auto outcome = optimize_bsm(psi, partition, start);
  REQUIRE(outcome.stationary);
  const auto loc = localize(psi, partition, outcome.bsm);
  for (int i = 0; i < outcome.bsm.count(); ++i)
    for (int j = i + 1; j < outcome.bsm.count(); ++j) {
      const double eps = 1e-4;
      const auto rotated = elementary_transform(outcome.bsm, {i, j, eps, false});
      const double change = localize(psi, partition, rotated).average - loc.average;
      CHECK(std::abs(change) < 1e-6);  // no linear term survives
    }
}

TEST_CASE("chain ground states: canonical bases audit as stationary, rotated ones do not") {
  for (int n : {6, 8}) {
    for (double j2 : {0.0, 0.4}) {
      const ModelParams params{n, 1.0, j2, Boundary::open, ChainLayout::single};
      const auto gs = ground_state(params, BasisSector::magnetization(n, 0)).vector;
      const auto pair = symmetric_pair(n, 1);
      REQUIRE(pair.has_value());
      const Partition partition = Partition::make(n, {pair->first}, {pair->second});
      auto sz = env_sz_operator();
      auto reflection = env_reflection_operator(n);
      const auto canonical = canonical_bsm(gs, partition, {sz.get(), reflection.get()});
      const auto report = optimality_residual(gs, partition, canonical);
      CAPTURE(n);
      CAPTURE(j2);
      CHECK(report.stationary);

      const auto rotated = elementary_transform(canonical, {0, 1, 0.05, false});
      const auto rotated_report = optimality_residual(gs, partition, rotated);
      CHECK_FALSE(rotated_report.stationary);
      // the leading slope matches its finite difference
      const auto loc = localize(gs, partition, rotated);
      const double eps = 1e-5;
      const auto nudged = elementary_transform(rotated, {0, 1, eps, false});
      const double fd = (localize(gs, partition, nudged).average - loc.average) / eps;
      CHECK(std::abs(rotated_report.pair_slopes(0, 1) - fd) < 1e-5);
    }
  }
}

TEST_CASE("reorthonormalization is a no-op on an orthonormal basis") {
  const auto psi = random_real_state(4, 61);
  const Partition partition = Partition::make(4, {0}, {1});
  const auto bsm = random_support_basis(psi, partition, 62);
  const auto redone = reorthonormalize(bsm);
  CHECK(redone.gram_defect() < 1e-12);
  const auto loc_a = localize(psi, partition, bsm);
  const auto loc_b = localize(psi, partition, redone);
  CHECK(loc_a.average == doctest::Approx(loc_b.average).epsilon(1e-10));
}

TEST_SUITE_END();
