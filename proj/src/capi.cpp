#include "lecm/capi.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "lecm/experiments.hpp"
#include "lecm/optimizer.hpp"

struct lecm_model {
  lecm::ModelParams params;
};

struct lecm_state {
  lecm::StateVector state;
  bool has_meta = false;
  lecm::ModelParams model;
  int two_sz = 0;
  std::uint64_t seed = 0;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct lecm_partition {
  lecm::Partition partition;
};

struct lecm_bsm {
  lecm::MeasurementBasis bsm;
};

struct lecm_localization {
  lecm::LocalizationResult loc;
};

struct lecm_report {
  lecm::OptimalityReport report;
};

namespace {

thread_local std::string g_last_error;

lecm_status map_code(lecm::Errc code) {
  switch (code) {
    case lecm::Errc::convergence:
      return LECM_ERR_EIGENSOLVER;
    case lecm::Errc::optimizer_stall:
      return LECM_ERR_OPTIMIZER;
    case lecm::Errc::symmetry:
    case lecm::Errc::not_symmetry_adapted:
      return LECM_ERR_SYMMETRY;
    case lecm::Errc::size_limit:
      return LECM_ERR_SIZE;
    case lecm::Errc::io:
      return LECM_ERR_IO;
    default:
      return LECM_ERR_INVALID;
  }
}

template <typename F>
lecm_status guarded(F&& f) noexcept {
  try {
    f();
    return LECM_OK;
  } catch (const lecm::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LECM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LECM_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) lecm::fail(lecm::Errc::invalid_argument, what);
}

lecm::ExperimentConfig to_config(const lecm_experiment_options* options) {
  require(options != nullptr, "options must not be null");
  lecm::ExperimentConfig config;
  config.model.n_sites = options->n_sites;
  config.model.j1 = options->j1;
  config.model.boundary =
      options->boundary == LECM_BOUNDARY_PERIODIC ? lecm::Boundary::periodic : lecm::Boundary::open;
  config.model.layout = options->layout == LECM_LAYOUT_TWO_DECOUPLED
                            ? lecm::ChainLayout::two_decoupled
                            : lecm::ChainLayout::single;
  config.two_sz = options->two_sz;
  config.seed = options->seed;
  if (options->tol > 0.0) config.tol = options->tol;
  config.allow_even_r = options->allow_even_r != 0;
  if (options->cache_dir) config.cache_dir = options->cache_dir;
  return config;
}

void emit_warnings(const lecm::SweepResult& sweep, const lecm_experiment_options* options) {
  if (sweep.warnings.empty()) return;
  if (options->warn_log) {
    lecm::write_lines(sweep.warnings, options->warn_log);
  } else {
    for (const auto& warning : sweep.warnings) std::fprintf(stderr, "warning: %s\n", warning.c_str());
  }
}

std::vector<const lecm::EnvOperator*> raw_ops(
    const std::vector<std::unique_ptr<lecm::EnvOperator>>& ops) {
  std::vector<const lecm::EnvOperator*> raw;
  for (const auto& op : ops) raw.push_back(op.get());
  return raw;
}

std::vector<std::unique_ptr<lecm::EnvOperator>> selected_ops(const lecm_state* state,
                                                             int32_t use_env_sz,
                                                             int32_t use_env_reflection) {
  std::vector<std::string> names;
  if (use_env_sz) names.push_back("env_sz");
  if (use_env_reflection) names.push_back("env_reflection");
  return lecm::named_symmetry_ops(names, state->state.n_sites());
}

}  // namespace

const char* lecm_version(void) { return "lecm 1.0.0"; }

const char* lecm_last_error(void) { return g_last_error.c_str(); }

void lecm_set_threads(int32_t n) { lecm::set_engine_threads(n); }

lecm_status lecm_model_create(int32_t n_sites, double j1, double j2, int32_t boundary,
                              int32_t layout, lecm_model** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(boundary == LECM_BOUNDARY_OPEN || boundary == LECM_BOUNDARY_PERIODIC,
            "boundary must be open or periodic");
    require(layout == LECM_LAYOUT_SINGLE || layout == LECM_LAYOUT_TWO_DECOUPLED,
            "layout must be single or two_decoupled");
    lecm::ModelParams params{n_sites, j1, j2,
                             boundary == LECM_BOUNDARY_PERIODIC ? lecm::Boundary::periodic
                                                                : lecm::Boundary::open,
                             layout == LECM_LAYOUT_TWO_DECOUPLED ? lecm::ChainLayout::two_decoupled
                                                                 : lecm::ChainLayout::single};
    params.validate();
    *out = new lecm_model{params};
  });
}

void lecm_model_destroy(lecm_model* model) { delete model; }

lecm_status lecm_ground_state(const lecm_model* model, int32_t two_sz, uint64_t seed, double tol,
                              lecm_state** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "model and out must not be null");
    lecm::LanczosOptions options;
    options.seed = seed;
    if (tol > 0.0) options.tol = tol;
    auto sector = lecm::BasisSector::magnetization(model->params.n_sites, two_sz);
    auto gs = lecm::ground_state(model->params, std::move(sector), options);
    *out = new lecm_state{std::move(gs.vector), true,     model->params, two_sz,
                          seed,                 gs.energy, gs.residual_norm, gs.iterations};
  });
}

lecm_status lecm_dense_ground_state(const lecm_model* model, int32_t two_sz, lecm_state** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "model and out must not be null");
    auto sector = lecm::BasisSector::magnetization(model->params.n_sites, two_sz);
    auto gs = lecm::dense_ground_state(model->params, std::move(sector));
    *out = new lecm_state{std::move(gs.vector), true,     model->params, two_sz,
                          0,                    gs.energy, gs.residual_norm, gs.iterations};
  });
}

lecm_status lecm_demo_state(const char* name, int32_t n_sites, uint64_t seed, lecm_state** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "name and out must not be null");
    *out = new lecm_state{lecm::demo_state(name, n_sites, seed), false, {}, 0, 0, 0.0, 0.0, 0};
  });
}

lecm_status lecm_state_save(const lecm_state* state, const char* path) {
  return guarded([&] {
    require(state != nullptr && path != nullptr, "state and path must not be null");
    require(state->has_meta, "only solver-produced states can be saved");
    lecm::GroundStateResult gs{state->energy, state->state, state->iterations, state->residual};
    lecm::save_state(gs, state->model, state->two_sz, state->seed, path);
  });
}

lecm_status lecm_state_load(const char* path, lecm_state** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be null");
    lecm::CachedStateHeader header;
    auto gs = lecm::load_state(path, nullptr, nullptr, nullptr, &header);
    *out = new lecm_state{std::move(gs.vector), true,      header.model,     header.two_sz,
                          header.seed,          gs.energy, gs.residual_norm, gs.iterations};
  });
}

void lecm_state_destroy(lecm_state* state) { delete state; }

lecm_status lecm_state_n_sites(const lecm_state* state, int32_t* out) {
  return guarded([&] {
    require(state != nullptr && out != nullptr, "state and out must not be null");
    *out = state->state.n_sites();
  });
}

lecm_status lecm_state_dim(const lecm_state* state, int64_t* out) {
  return guarded([&] {
    require(state != nullptr && out != nullptr, "state and out must not be null");
    *out = static_cast<int64_t>(state->state.dim());
  });
}

lecm_status lecm_state_energy(const lecm_state* state, double* out) {
  return guarded([&] {
    require(state != nullptr && out != nullptr, "state and out must not be null");
    require(state->has_meta, "state does not carry solver metadata");
    *out = state->energy;
  });
}

lecm_status lecm_state_residual(const lecm_state* state, double* out) {
  return guarded([&] {
    require(state != nullptr && out != nullptr, "state and out must not be null");
    require(state->has_meta, "state does not carry solver metadata");
    *out = state->residual;
  });
}

lecm_status lecm_state_iterations(const lecm_state* state, int32_t* out) {
  return guarded([&] {
    require(state != nullptr && out != nullptr, "state and out must not be null");
    require(state->has_meta, "state does not carry solver metadata");
    *out = state->iterations;
  });
}

lecm_status lecm_state_total_spin_squared(const lecm_state* state, double* out) {
  return guarded([&] {
    require(state != nullptr && out != nullptr, "state and out must not be null");
    *out = lecm::total_spin_squared(state->state.sector(), state->state.real_amplitudes());
  });
}

lecm_status lecm_partition_create(int32_t n_sites, const int32_t* s1, int32_t n1,
                                  const int32_t* s2, int32_t n2, lecm_partition** out) {
  return guarded([&] {
    require(s1 != nullptr && s2 != nullptr && out != nullptr, "site lists must not be null");
    require(n1 > 0 && n2 > 0, "both parts need at least one site");
    *out = new lecm_partition{lecm::Partition::make(
        n_sites, std::vector<int>(s1, s1 + n1), std::vector<int>(s2, s2 + n2))};
  });
}

void lecm_partition_destroy(lecm_partition* partition) { delete partition; }

lecm_status lecm_symmetric_pair(int32_t n_sites, int32_t r, int32_t* site_a, int32_t* site_b) {
  return guarded([&] {
    require(site_a != nullptr && site_b != nullptr, "out sites must not be null");
    auto pair = lecm::symmetric_pair(n_sites, r);
    require(pair.has_value(), "no mirror-symmetric placement for this distance");
    *site_a = pair->first;
    *site_b = pair->second;
  });
}

lecm_status lecm_two_site(const lecm_state* state, int32_t site_a, int32_t site_b, double* sbar,
                          double* lambda_s, double* lambda_t) {
  return guarded([&] {
    require(state != nullptr && sbar != nullptr, "state and sbar must not be null");
    const auto rho = lecm::reduced_density_matrix(state->state, {site_a, site_b});
    const auto result = lecm::two_site_lecm_spin_half(rho);
    *sbar = result.sbar;
    if (lambda_s) *lambda_s = result.lambda_s;
    if (lambda_t) *lambda_t = result.lambda_t;
  });
}

lecm_status lecm_canonical(const lecm_state* state, const lecm_partition* partition,
                           int32_t use_env_sz, int32_t use_env_reflection,
                           lecm_localization** out) {
  return guarded([&] {
    require(state != nullptr && partition != nullptr && out != nullptr,
            "state, partition and out must not be null");
    auto ops = selected_ops(state, use_env_sz, use_env_reflection);
    auto result = lecm::canonical_localization(state->state, partition->partition, raw_ops(ops));
    *out = new lecm_localization{std::move(result.localization)};
  });
}

lecm_status lecm_bsm_canonical(const lecm_state* state, const lecm_partition* partition,
                               int32_t use_env_sz, int32_t use_env_reflection, lecm_bsm** out) {
  return guarded([&] {
    require(state != nullptr && partition != nullptr && out != nullptr,
            "state, partition and out must not be null");
    auto ops = selected_ops(state, use_env_sz, use_env_reflection);
    *out = new lecm_bsm{lecm::canonical_bsm(state->state, partition->partition, raw_ops(ops))};
  });
}

lecm_status lecm_bsm_random(const lecm_state* state, const lecm_partition* partition,
                            uint64_t seed, lecm_bsm** out) {
  return guarded([&] {
    require(state != nullptr && partition != nullptr && out != nullptr,
            "state, partition and out must not be null");
    // one Haar sample from the oracle's generator
    const auto rho = lecm::reduced_density_matrix(state->state, partition->partition.env_sites);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.m);
    int rank = 0;
    for (Eigen::Index c = 0; c < solver.eigenvalues().size(); ++c)
      if (solver.eigenvalues()(c) > lecm::kProbabilityTol) ++rank;
    require(rank > 0, "environment density matrix has empty support");
    Eigen::MatrixXcd support(rho.dim(), rank);
    int col = 0;
    for (Eigen::Index c = 0; c < solver.eigenvalues().size(); ++c)
      if (solver.eigenvalues()(c) > lecm::kProbabilityTol)
        support.col(col++) = solver.eigenvectors().col(c);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(rank, rank);
    const bool real_state = state->state.is_real();
    for (int c = 0; c < rank; ++c)
      for (int r = 0; r < rank; ++r)
        g(r, c) = real_state ? lecm::Complex(gauss(rng), 0.0)
                             : lecm::Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rank, rank);
    lecm::MeasurementBasis bsm;
    if (real_state) {
      // keep the sampled basis real so real ETs can reach it
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real_solver(rho.m.real());
      Eigen::MatrixXd real_support(rho.dim(), rank);
      col = 0;
      for (Eigen::Index c = 0; c < real_solver.eigenvalues().size(); ++c)
        if (real_solver.eigenvalues()(c) > lecm::kProbabilityTol)
          real_support.col(col++) = real_solver.eigenvectors().col(c);
      bsm.vectors = (real_support * q.real()).cast<lecm::Complex>();
      bsm = lecm::reorthonormalize(bsm);
    } else {
      bsm.vectors = support * q;
    }
    *out = new lecm_bsm{std::move(bsm)};
  });
}

lecm_status lecm_bsm_perturb(lecm_bsm* bsm, double epsilon, uint64_t seed) {
  return guarded([&] {
    require(bsm != nullptr, "bsm must not be null");
    require(bsm->bsm.count() >= 2, "perturbation needs at least two vectors");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, bsm->bsm.count() - 1);
    int i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    bsm->bsm = lecm::elementary_transform(bsm->bsm, {i, j, epsilon, false});
  });
}

lecm_status lecm_bsm_save(const lecm_bsm* bsm, const char* path) {
  return guarded([&] {
    require(bsm != nullptr && path != nullptr, "bsm and path must not be null");
    std::ofstream out(path, std::ios::trunc);
    if (!out) lecm::fail(lecm::Errc::io, std::string("cannot open ") + path);
    out << "lecm-bsm 1\n";
    out << bsm->bsm.env_dim() << " " << bsm->bsm.count() << " 1\n";
    out.precision(17);
    for (Eigen::Index r = 0; r < bsm->bsm.vectors.rows(); ++r) {
      for (Eigen::Index c = 0; c < bsm->bsm.vectors.cols(); ++c) {
        if (c) out << " ";
        out << bsm->bsm.vectors(r, c).real() << " " << bsm->bsm.vectors(r, c).imag();
      }
      out << "\n";
    }
    if (!out) lecm::fail(lecm::Errc::io, std::string("failed while writing ") + path);
  });
}

lecm_status lecm_bsm_load(const char* path, lecm_bsm** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be null");
    std::ifstream in(path);
    if (!in) lecm::fail(lecm::Errc::io, std::string("cannot open ") + path);
    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (!in || tag != "lecm-bsm" || version != 1)
      lecm::fail(lecm::Errc::invalid_argument, std::string(path) + " is not a bsm file");
    std::int64_t env_dim = 0;
    int count = 0, is_complex = 0;
    in >> env_dim >> count >> is_complex;
    if (!in || env_dim < 1 || count < 1 || env_dim > (std::int64_t{1} << 20))
      lecm::fail(lecm::Errc::invalid_argument, std::string(path) + " has a malformed header");
    lecm::MeasurementBasis bsm;
    bsm.vectors.resize(env_dim, count);
    for (std::int64_t r = 0; r < env_dim; ++r)
      for (int c = 0; c < count; ++c) {
        double re = 0.0, im = 0.0;
        in >> re;
        if (is_complex) in >> im;
        if (!in) lecm::fail(lecm::Errc::invalid_argument, std::string(path) + " is truncated");
        bsm.vectors(r, c) = lecm::Complex(re, im);
      }
    bsm.require_orthonormal(1e-8);
    // text round-trips carry small defects; restore machine-precision columns
    if (bsm.gram_defect() > 1e-12) bsm = lecm::reorthonormalize(bsm);
    *out = new lecm_bsm{std::move(bsm)};
  });
}

lecm_status lecm_bsm_dims(const lecm_bsm* bsm, int64_t* env_dim, int32_t* count) {
  return guarded([&] {
    require(bsm != nullptr, "bsm must not be null");
    if (env_dim) *env_dim = bsm->bsm.env_dim();
    if (count) *count = bsm->bsm.count();
  });
}

void lecm_bsm_destroy(lecm_bsm* bsm) { delete bsm; }

lecm_status lecm_localize(const lecm_state* state, const lecm_partition* partition,
                          const lecm_bsm* bsm, lecm_localization** out) {
  return guarded([&] {
    require(state != nullptr && partition != nullptr && bsm != nullptr && out != nullptr,
            "state, partition, bsm and out must not be null");
    *out = new lecm_localization{lecm::localize(state->state, partition->partition, bsm->bsm)};
  });
}

lecm_status lecm_localization_average(const lecm_localization* loc, double* out) {
  return guarded([&] {
    require(loc != nullptr && out != nullptr, "loc and out must not be null");
    *out = loc->loc.average;
  });
}

lecm_status lecm_localization_count(const lecm_localization* loc, int32_t* out) {
  return guarded([&] {
    require(loc != nullptr && out != nullptr, "loc and out must not be null");
    *out = static_cast<int32_t>(loc->loc.probabilities.size());
  });
}

lecm_status lecm_localization_probability(const lecm_localization* loc, int32_t i, double* out) {
  return guarded([&] {
    require(loc != nullptr && out != nullptr, "loc and out must not be null");
    require(i >= 0 && i < loc->loc.probabilities.size(), "branch index out of range");
    *out = loc->loc.probabilities(i);
  });
}

lecm_status lecm_localization_entropy(const lecm_localization* loc, int32_t i, double* out) {
  return guarded([&] {
    require(loc != nullptr && out != nullptr, "loc and out must not be null");
    require(i >= 0 && i < loc->loc.entropies.size(), "branch index out of range");
    *out = loc->loc.entropies(i);
  });
}

void lecm_localization_destroy(lecm_localization* loc) { delete loc; }

lecm_status lecm_check_optimality(const lecm_state* state, const lecm_partition* partition,
                                  const lecm_bsm* bsm, double stationarity_tol,
                                  lecm_report** out) {
  return guarded([&] {
    require(state != nullptr && partition != nullptr && bsm != nullptr && out != nullptr,
            "state, partition, bsm and out must not be null");
    const double tol = stationarity_tol > 0.0 ? stationarity_tol : 1e-8;
    *out = new lecm_report{
        lecm::optimality_residual(state->state, partition->partition, bsm->bsm, tol)};
  });
}

lecm_status lecm_report_max_residual(const lecm_report* report, double* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "report and out must not be null");
    *out = report->report.max_abs_residual;
  });
}

lecm_status lecm_report_stationary(const lecm_report* report, int32_t* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "report and out must not be null");
    *out = report->report.stationary ? 1 : 0;
  });
}

lecm_status lecm_report_pair_count(const lecm_report* report, int32_t* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "report and out must not be null");
    const int count = static_cast<int>(report->report.pair_slopes.rows());
    *out = count * (count - 1) / 2;
  });
}

lecm_status lecm_report_pair(const lecm_report* report, int32_t index, int32_t* i, int32_t* j,
                             double* p_i, double* p_j, double* sbar1) {
  return guarded([&] {
    require(report != nullptr, "report must not be null");
    const int count = static_cast<int>(report->report.pair_slopes.rows());
    int k = 0;
    for (int a = 0; a < count; ++a)
      for (int b = a + 1; b < count; ++b, ++k)
        if (k == index) {
          if (i) *i = a;
          if (j) *j = b;
          if (p_i) *p_i = report->report.probabilities(a);
          if (p_j) *p_j = report->report.probabilities(b);
          if (sbar1) *sbar1 = report->report.pair_slopes(a, b);
          return;
        }
    lecm::fail(lecm::Errc::invalid_argument, "pair index out of range");
  });
}

void lecm_report_destroy(lecm_report* report) { delete report; }

lecm_status lecm_optimize(const lecm_state* state, const lecm_partition* partition,
                          const lecm_bsm* start, int32_t direction, double step_init,
                          double stationarity_tol, int32_t max_iters, lecm_bsm** out_bsm,
                          lecm_localization** out_loc, lecm_report** out_report,
                          double** trajectory, int64_t* trajectory_len, int32_t* stationary) {
  return guarded([&] {
    require(state != nullptr && partition != nullptr && start != nullptr,
            "state, partition and start must not be null");
    lecm::OptimizerConfig config;
    config.direction =
        direction == LECM_MINIMIZE ? lecm::OptimizeDirection::minimize : lecm::OptimizeDirection::maximize;
    if (step_init > 0.0) config.step_init = step_init;
    if (stationarity_tol > 0.0) config.stationarity_tol = stationarity_tol;
    if (max_iters > 0) config.max_iters = max_iters;
    auto outcome = lecm::optimize_bsm(state->state, partition->partition, start->bsm, config);
    if (stationary) *stationary = outcome.stationary ? 1 : 0;
    if (trajectory && trajectory_len) {
      *trajectory_len = static_cast<int64_t>(outcome.trajectory.size());
      *trajectory = static_cast<double*>(std::malloc(sizeof(double) * outcome.trajectory.size()));
      if (*trajectory)
        std::memcpy(*trajectory, outcome.trajectory.data(),
                    sizeof(double) * outcome.trajectory.size());
    }
    if (out_bsm) *out_bsm = new lecm_bsm{std::move(outcome.bsm)};
    if (out_loc) *out_loc = new lecm_localization{std::move(outcome.localization)};
    if (out_report) *out_report = new lecm_report{std::move(outcome.report)};
  });
}

void lecm_buffer_destroy(double* buffer) { std::free(buffer); }

lecm_status lecm_random_bsm_oracle(const lecm_state* state, const lecm_partition* partition,
                                   int64_t n_trials, uint64_t seed, double* best_max,
                                   double* best_min) {
  return guarded([&] {
    require(state != nullptr && partition != nullptr, "state and partition must not be null");
    const auto result =
        lecm::random_bsm_oracle(state->state, partition->partition, n_trials, seed);
    if (best_max) *best_max = result.best_max;
    if (best_min) *best_min = result.best_min;
  });
}

lecm_status lecm_run_sweep(const lecm_experiment_options* options, const double* j2_values,
                           int32_t n_j2, const int32_t* r_values, int32_t n_r,
                           const char* csv_path, int32_t* rows_written) {
  return guarded([&] {
    require(j2_values != nullptr && r_values != nullptr && csv_path != nullptr,
            "j2 list, r list and csv_path must not be null");
    lecm::ExperimentConfig config = to_config(options);
    config.j2_values.assign(j2_values, j2_values + n_j2);
    config.r_values.assign(r_values, r_values + n_r);
    const auto sweep = lecm::run_lecm_sweep(config);
    emit_warnings(sweep, options);
    lecm::write_sweep_csv(sweep.rows, csv_path);
    if (options->plot_script)
      lecm::write_sweep_plot_script(csv_path, config.j2_values, options->plot_script);
    if (rows_written) *rows_written = static_cast<int32_t>(sweep.rows.size());
  });
}

lecm_status lecm_run_entanglement_length(const lecm_experiment_options* options,
                                         const double* j2_values, int32_t n_j2, int32_t r1,
                                         int32_t r2, const char* csv_path, int32_t* rows_written) {
  return guarded([&] {
    require(j2_values != nullptr && csv_path != nullptr, "j2 list and csv_path must not be null");
    lecm::ExperimentConfig config = to_config(options);
    config.j2_values.assign(j2_values, j2_values + n_j2);
    config.r_values = {r1, r2};
    const auto estimates = lecm::run_entanglement_length(config, r1, r2);
    lecm::write_length_csv(estimates, csv_path);
    if (options->plot_script) lecm::write_length_plot_script(csv_path, options->plot_script);
    if (rows_written) *rows_written = static_cast<int32_t>(estimates.size());
  });
}

lecm_status lecm_run_decoupled_baseline(const lecm_experiment_options* options,
                                        const double* j2_values, int32_t n_j2,
                                        const int32_t* r_values, int32_t n_r, const char* csv_path,
                                        int32_t* rows_written) {
  return guarded([&] {
    require(j2_values != nullptr && r_values != nullptr && csv_path != nullptr,
            "j2 list, r list and csv_path must not be null");
    lecm::ExperimentConfig config = to_config(options);
    config.j2_values.assign(j2_values, j2_values + n_j2);
    config.r_values.assign(r_values, r_values + n_r);
    const auto sweep = lecm::run_decoupled_baseline(config);
    emit_warnings(sweep, options);
    lecm::write_sweep_csv(sweep.rows, csv_path);
    if (rows_written) *rows_written = static_cast<int32_t>(sweep.rows.size());
  });
}

lecm_status lecm_cached_ground_state(const lecm_experiment_options* options, double j2,
                                     lecm_state** out, int32_t* cache_hit) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    lecm::ExperimentConfig config = to_config(options);
    bool hit = false;
    auto gs = lecm::cached_ground_state(config, j2, &hit);
    lecm::ModelParams model = config.model;
    model.j2 = j2;
    if (cache_hit) *cache_hit = hit ? 1 : 0;
    *out = new lecm_state{std::move(gs.vector), true,     model,        config.two_sz,
                          config.seed,          gs.energy, gs.residual_norm, gs.iterations};
  });
}

lecm_status lecm_write_residuals_csv(const lecm_report* report, const char* path) {
  return guarded([&] {
    require(report != nullptr && path != nullptr, "report and path must not be null");
    lecm::write_residuals_csv(report->report, path);
  });
}
