#include "lecm/schmidt.hpp"

namespace lecm {

namespace {

constexpr double kTruncTol = 1e-12;
constexpr std::int64_t kMaxEntries = std::int64_t{1} << 24;

}  // namespace

Eigen::MatrixXcd coefficient_matrix(const StateVector& psi, const Partition& partition) {
  partition.validate(psi.n_sites());
  const int ds = partition.system_dim();
  const std::int64_t de = partition.env_dim();
  if (static_cast<std::int64_t>(ds) * de > kMaxEntries)
    fail(Errc::size_limit, "coefficient matrix would exceed the dense size limit");

  const int d1 = partition.d1();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(ds, de);
  psi.for_each([&](std::uint64_t s, std::size_t, Complex amp) {
    std::uint32_t a = 0, b = 0, e = 0;
    for (std::size_t t = 0; t < partition.s1_sites.size(); ++t)
      a |= static_cast<std::uint32_t>((s >> partition.s1_sites[t]) & 1) << t;
    for (std::size_t t = 0; t < partition.s2_sites.size(); ++t)
      b |= static_cast<std::uint32_t>((s >> partition.s2_sites[t]) & 1) << t;
    for (std::size_t t = 0; t < partition.env_sites.size(); ++t)
      e |= static_cast<std::uint32_t>((s >> partition.env_sites[t]) & 1) << t;
    m(a + d1 * b, e) += amp;
  });
  return m;
}

SchmidtDecomposition schmidt_decompose(const StateVector& psi, const Partition& partition) {
  if (partition.env_sites.empty())
    fail(Errc::invalid_argument, "schmidt_decompose requires a nonempty environment");
  const Eigen::MatrixXcd m = coefficient_matrix(psi, partition);

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition result;
  const Eigen::Index count = svd.singularValues().size();
  result.lambdas.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    result.lambdas(i) = svd.singularValues()(i) * svd.singularValues()(i);
    if (result.lambdas(i) > kTruncTol) result.schmidt_number = static_cast<int>(i) + 1;
  }
  result.sys_vectors = svd.matrixU();
  result.env_vectors = svd.matrixV().conjugate();
  return result;
}

}  // namespace lecm
