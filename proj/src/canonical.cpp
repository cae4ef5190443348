#include "lecm/canonical.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace lecm {

namespace {

constexpr double kTruncTol = 1e-12;
constexpr std::int64_t kDenseEnvLimit = 4096;

std::uint32_t extract_bits(std::uint64_t pattern, const std::vector<int>& sites) {
  std::uint32_t config = 0;
  for (std::size_t t = 0; t < sites.size(); ++t)
    config |= static_cast<std::uint32_t>((pattern >> sites[t]) & 1) << t;
  return config;
}

// Largest-magnitude entry rotated to the positive real axis; deterministic
// representative of each branch vector.
void phase_fix(Eigen::MatrixXcd& vectors, Eigen::MatrixXcd* mirror, int col) {
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
    const double mag = std::abs(vectors(r, col));
    if (mag > best + 1e-14) {
      best = mag;
      pivot = r;
    }
  }
  if (best <= 0.0) return;
  const Complex phase = vectors(pivot, col) / best;
  vectors.col(col) *= std::conj(phase);
  if (mirror && mirror->size() > 0) mirror->col(col) *= phase;
}

bool lexicographic_less(const Eigen::MatrixXcd& vectors, int a, int b) {
  for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
    const Complex va = vectors(r, a), vb = vectors(r, b);
    if (va.real() != vb.real()) return va.real() < vb.real();
    if (va.imag() != vb.imag()) return va.imag() < vb.imag();
  }
  return false;
}

class EnvSzOperator final : public EnvOperator {
 public:
  std::string name() const override { return "env_sz"; }
  Eigen::MatrixXcd block_elements(const EnvSupport& support,
                                  const Eigen::MatrixXcd& vectors) const override {
    Eigen::MatrixXcd scaled = vectors;
    for (Eigen::Index r = 0; r < scaled.rows(); ++r) {
      const double sz = std::popcount(support.patterns[r]) - 0.5 * support.n_env;
      scaled.row(r) *= sz;
    }
    return vectors.adjoint() * scaled;
  }
};

class EnvReflectionOperator final : public EnvOperator {
 public:
  explicit EnvReflectionOperator(int n_sites) : n_sites_(n_sites) {}
  std::string name() const override { return "env_reflection"; }

  Eigen::MatrixXcd block_elements(const EnvSupport& support,
                                  const Eigen::MatrixXcd& vectors) const override {
    for (int site : support.env_sites) {
      const int mirror = n_sites_ - 1 - site;
      if (std::find(support.env_sites.begin(), support.env_sites.end(), mirror) ==
          support.env_sites.end())
        fail(Errc::symmetry, "environment is not closed under the chain reflection");
    }
    Eigen::MatrixXcd reflected = Eigen::MatrixXcd::Zero(vectors.rows(), vectors.cols());
    for (std::size_t r = 0; r < support.patterns.size(); ++r) {
      std::uint64_t image = 0;
      std::uint64_t p = support.patterns[r];
      while (p) {
        const int site = std::countr_zero(p);
        image |= std::uint64_t{1} << (n_sites_ - 1 - site);
        p &= p - 1;
      }
      const std::ptrdiff_t row = support.row_of(image);
      if (row >= 0) reflected(row, Eigen::all) = vectors.row(r);
    }
    return vectors.adjoint() * reflected;
  }

 private:
  int n_sites_;
};

class DenseEnvOperator final : public EnvOperator {
 public:
  DenseEnvOperator(std::string name, Eigen::MatrixXcd matrix)
      : name_(std::move(name)), matrix_(std::move(matrix)) {}
  std::string name() const override { return name_; }

  Eigen::MatrixXcd block_elements(const EnvSupport& support,
                                  const Eigen::MatrixXcd& vectors) const override {
    const std::int64_t de = std::int64_t{1} << support.env_sites.size();
    if (de > kDenseEnvLimit || matrix_.rows() != de)
      fail(Errc::size_limit, "dense env operator does not match the environment dimension");
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(de, vectors.cols());
    for (std::size_t r = 0; r < support.patterns.size(); ++r)
      dense.row(extract_bits(support.patterns[r], support.env_sites)) = vectors.row(r);
    Eigen::MatrixXcd applied = matrix_ * dense;
    Eigen::MatrixXcd restricted(vectors.rows(), vectors.cols());
    for (std::size_t r = 0; r < support.patterns.size(); ++r)
      restricted.row(r) = applied.row(extract_bits(support.patterns[r], support.env_sites));
    // within-support block of O V; components leaking out of the support are
    // caught by the commutation check
    return vectors.adjoint() * restricted;
  }

 private:
  std::string name_;
  Eigen::MatrixXcd matrix_;
};

struct EnvVectors {
  EnvSupport support;
  Eigen::MatrixXcd vectors;  // support rows x schmidt_number
};

// Support-restricted env Schmidt vectors e_a = C^dagger u_a / sqrt(lambda_a),
// assembled in one pass over the state.
EnvVectors build_env_vectors(const StateVector& psi, const Partition& partition,
                             const Eigen::MatrixXcd& sys_vectors, const Eigen::VectorXd& lambdas) {
  EnvVectors env;
  env.support.env_sites = partition.env_sites;
  env.support.n_env = static_cast<int>(partition.env_sites.size());
  std::uint64_t env_mask = 0;
  for (int site : partition.env_sites) env_mask |= std::uint64_t{1} << site;

  env.support.patterns.reserve(psi.dim());
  psi.for_each([&](std::uint64_t s, std::size_t, Complex) {
    env.support.patterns.push_back(s & env_mask);
  });
  std::sort(env.support.patterns.begin(), env.support.patterns.end());
  env.support.patterns.erase(
      std::unique(env.support.patterns.begin(), env.support.patterns.end()),
      env.support.patterns.end());

  const int d1 = partition.d1();
  const int count = static_cast<int>(sys_vectors.cols());
  env.vectors = Eigen::MatrixXcd::Zero(env.support.patterns.size(), count);
  psi.for_each([&](std::uint64_t s, std::size_t, Complex amp) {
    const std::uint32_t a = extract_bits(s, partition.s1_sites);
    const std::uint32_t b = extract_bits(s, partition.s2_sites);
    const Eigen::Index row = env.support.row_of(s & env_mask);
    for (int col = 0; col < count; ++col)
      env.vectors(row, col) += amp * std::conj(sys_vectors(a + d1 * b, col));
  });
  for (int col = 0; col < count; ++col) env.vectors.col(col) /= std::sqrt(lambdas(col));
  return env;
}

std::vector<std::pair<int, int>> degenerate_clusters(const Eigen::VectorXd& values, double tol) {
  std::vector<std::pair<int, int>> clusters;
  int begin = 0;
  for (int i = 1; i <= values.size(); ++i) {
    if (i == values.size() || std::abs(values(i) - values(i - 1)) >= tol) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  return clusters;
}

}  // namespace

std::ptrdiff_t EnvSupport::row_of(std::uint64_t pattern) const {
  auto it = std::lower_bound(patterns.begin(), patterns.end(), pattern);
  if (it == patterns.end() || *it != pattern) return -1;
  return it - patterns.begin();
}

std::unique_ptr<EnvOperator> env_sz_operator() { return std::make_unique<EnvSzOperator>(); }

std::unique_ptr<EnvOperator> env_reflection_operator(int n_sites) {
  return std::make_unique<EnvReflectionOperator>(n_sites);
}

std::unique_ptr<EnvOperator> env_dense_operator(std::string name, Eigen::MatrixXcd matrix) {
  if (matrix.rows() != matrix.cols() ||
      (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    fail(Errc::invalid_argument, "env operator must be a square Hermitian matrix");
  return std::make_unique<DenseEnvOperator>(std::move(name), std::move(matrix));
}

std::vector<std::unique_ptr<EnvOperator>> named_symmetry_ops(const std::vector<std::string>& names,
                                                             int n_sites) {
  std::vector<std::unique_ptr<EnvOperator>> ops;
  for (const auto& name : names) {
    if (name == "env_sz")
      ops.push_back(env_sz_operator());
    else if (name == "env_reflection")
      ops.push_back(env_reflection_operator(n_sites));
    else
      fail(Errc::invalid_argument, "unknown symmetry operator: " + name);
  }
  return ops;
}

LecmResult canonical_localization(const StateVector& psi, const Partition& partition,
                const std::vector<const EnvOperator*>& symmetry_ops) {
  partition.validate(psi.n_sites());
  if (partition.env_sites.empty())
    fail(Errc::invalid_argument, "lecm requires a nonempty environment");

  const DensityMatrix rho_s = reduced_density_matrix(psi, partition.system_sites());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_s.m);

  const int ds = rho_s.dim();
  int count = 0;
  for (int i = 0; i < ds; ++i)
    if (solver.eigenvalues()(ds - 1 - i) > kTruncTol) ++count;
  if (count == 0) fail(Errc::invalid_density, "system density matrix has empty support");

  Eigen::VectorXd lambdas(count);
  Eigen::MatrixXcd sys_vectors(ds, count);
  for (int i = 0; i < count; ++i) {
    lambdas(i) = solver.eigenvalues()(ds - 1 - i);
    sys_vectors.col(i) = solver.eigenvectors().col(ds - 1 - i);
  }

  EnvVectors env = build_env_vectors(psi, partition, sys_vectors, lambdas);
  std::ostringstream policy;

  const auto clusters = degenerate_clusters(lambdas, kDegeneracyTol);
  const bool has_degeneracy =
      std::any_of(clusters.begin(), clusters.end(),
                  [](const auto& c) { return c.second - c.first > 1; });

  if (!symmetry_ops.empty()) {
    // commutation audit of every operator against rho_E on its support:
    // [O, rho]_(ab) = (lambda_b - lambda_a) <e_a|O|e_b>
    for (const EnvOperator* op : symmetry_ops) {
      const Eigen::MatrixXcd block = op->block_elements(env.support, env.vectors);
      double defect = 0.0;
      for (int a = 0; a < count; ++a)
        for (int b = 0; b < count; ++b)
          defect += std::norm((lambdas(b) - lambdas(a)) * block(a, b));
      if (std::sqrt(defect) > 1e-8)
        fail(Errc::symmetry,
             "operator " + op->name() + " does not commute with the environment density matrix");
    }
  }

  std::vector<std::vector<double>> labels(count);
  if (has_degeneracy && !symmetry_ops.empty()) {
    for (const auto& [begin, end] : clusters) {
      if (end - begin < 1) continue;
      std::vector<std::pair<int, int>> blocks{{begin, end}};
      for (const EnvOperator* op : symmetry_ops) {
        std::vector<std::pair<int, int>> next_blocks;
        for (const auto& [b0, b1] : blocks) {
          const int width = b1 - b0;
          if (width == 1) {
            const Eigen::MatrixXcd one =
                op->block_elements(env.support, env.vectors.middleCols(b0, 1));
            labels[b0].push_back(one(0, 0).real());
            next_blocks.emplace_back(b0, b1);
            continue;
          }
          const Eigen::MatrixXcd block =
              op->block_elements(env.support, env.vectors.middleCols(b0, width));
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sub(0.5 * (block + block.adjoint()));
          const Eigen::MatrixXcd rotation = sub.eigenvectors();  // ascending eigenvalues
          env.vectors.middleCols(b0, width) *= rotation;
          sys_vectors.middleCols(b0, width) *= rotation.conjugate();
          for (int i = 0; i < width; ++i) labels[b0 + i].push_back(sub.eigenvalues()(i));
          const auto sub_clusters = degenerate_clusters(sub.eigenvalues(), kDegeneracyTol);
          for (const auto& [s0, s1] : sub_clusters) next_blocks.emplace_back(b0 + s0, b0 + s1);
        }
        blocks = std::move(next_blocks);
      }
    }
    policy << "degenerate clusters resolved by";
    for (const EnvOperator* op : symmetry_ops) policy << " " << op->name();
  } else if (has_degeneracy) {
    policy << "degenerate clusters present; no symmetry operators supplied";
  } else {
    policy << "spectrum nondegenerate";
  }

  for (int col = 0; col < count; ++col) phase_fix(sys_vectors, &env.vectors, col);

  // residual ties resolved by a fixed ordering convention on the branch vectors
  std::vector<int> cluster_of(count);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (int i = clusters[c].first; i < clusters[c].second; ++i) cluster_of[i] = static_cast<int>(c);
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (cluster_of[a] != cluster_of[b]) return cluster_of[a] < cluster_of[b];
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    return lexicographic_less(sys_vectors, a, b);
  });

  LecmResult result;
  result.degeneracy_policy_applied = policy.str();
  result.decomposition.lambdas.resize(count);
  result.decomposition.sys_vectors.resize(ds, count);
  result.decomposition.schmidt_number = count;
  const bool materialize_env = partition.env_dim() <= kDenseEnvLimit;
  if (materialize_env)
    result.decomposition.env_vectors = Eigen::MatrixXcd::Zero(partition.env_dim(), count);

  const int d1 = partition.d1();
  const int d2 = partition.d2();
  result.localization.d1 = d1;
  result.localization.d2 = d2;
  result.localization.probabilities.resize(count);
  result.localization.entropies.resize(count);
  result.localization.branches.resize(count);
  result.localization.active.assign(count, 1);

  for (int slot = 0; slot < count; ++slot) {
    const int src = order[slot];
    result.decomposition.lambdas(slot) = lambdas(src);
    result.decomposition.sys_vectors.col(slot) = sys_vectors.col(src);
    if (materialize_env)
      for (std::size_t r = 0; r < env.support.patterns.size(); ++r)
        result.decomposition.env_vectors(
            extract_bits(env.support.patterns[r], partition.env_sites), slot) =
            env.vectors(r, src);
    result.localization.probabilities(slot) = lambdas(src);
    result.localization.branches[slot] =
        Eigen::Map<const Eigen::MatrixXcd>(sys_vectors.col(src).data(), d1, d2);
    result.localization.entropies(slot) = branch_entropy(result.localization.branches[slot]);
  }
  result.localization.average =
      result.localization.probabilities.dot(result.localization.entropies);

  if (partition.s1_sites.size() == 1 && partition.s2_sites.size() == 1) {
    // weights of the singlet and the m = 0 triplet in the two-site system
    Eigen::Vector4cd singlet = Eigen::Vector4cd::Zero(), triplet = Eigen::Vector4cd::Zero();
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    triplet(1) = 1.0 / std::sqrt(2.0);
    triplet(2) = 1.0 / std::sqrt(2.0);
    result.singlet_weight = (singlet.adjoint() * rho_s.m * singlet)(0).real();
    result.triplet_weight = (triplet.adjoint() * rho_s.m * triplet)(0).real();
  }
  return result;
}

TwoSiteLecm two_site_lecm_spin_half(const DensityMatrix& rho_s) {
  if (rho_s.dim() != 4) fail(Errc::invalid_argument, "two-site density matrix must be 4 x 4");
  Eigen::Matrix4cd sz = Eigen::Matrix4cd::Zero();
  sz(0, 0) = -1.0;
  sz(3, 3) = 1.0;
  Eigen::Matrix4cd swap = Eigen::Matrix4cd::Identity();
  swap(1, 1) = swap(2, 2) = 0.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  const double sz_defect = (rho_s.m * sz - sz * rho_s.m).norm();
  const double swap_defect = (rho_s.m * swap - swap * rho_s.m).norm();
  if (sz_defect > 1e-8 || swap_defect > 1e-8)
    fail(Errc::not_symmetry_adapted,
         "two-site density matrix does not commute with Sz and the site swap");

  TwoSiteLecm result;
  const double cross = rho_s.m(1, 2).real();
  const double antiparallel = 0.5 * (rho_s.m(1, 1).real() + rho_s.m(2, 2).real());
  result.lambda_s = antiparallel - cross;
  result.lambda_t = antiparallel + cross;
  result.sbar = result.lambda_s + result.lambda_t;
  return result;
}

MeasurementBasis canonical_bsm(const StateVector& psi, const Partition& partition,
                               const std::vector<const EnvOperator*>& symmetry_ops) {
  if (partition.env_dim() > kDenseEnvLimit)
    fail(Errc::size_limit, "environment too large to materialize the canonical basis");
  const LecmResult result = canonical_localization(psi, partition, symmetry_ops);
  MeasurementBasis bsm;
  bsm.vectors = result.decomposition.env_vectors;
  return bsm;
}

double reduced_condition_residual(const LocalizationResult& loc, int i, int j) {
  const int count = static_cast<int>(loc.branches.size());
  if (i < 0 || j < 0 || i >= count || j >= count)
    fail(Errc::invalid_argument, "branch index out of range");
  if (!loc.active[i] || !loc.active[j])
    fail(Errc::invalid_argument, "both branches must carry probability");
  const Eigen::MatrixXcd& q = loc.branches[i];
  const Eigen::MatrixXcd& r = loc.branches[j];
  const Eigen::MatrixXcd delta = 0.5 * (q * r.adjoint() + r * q.adjoint());
  DensityMatrix rho_i{q * q.adjoint()};
  DensityMatrix rho_j{r * r.adjoint()};
  const double lhs = support_trace_log(delta, rho_i);
  const double rhs = support_trace_log(delta, rho_j);
  return std::abs(lhs - rhs);
}

}  // namespace lecm
