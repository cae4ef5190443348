// Command-line driver for the lecm shared library. Everything below talks to
// the C API only.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lecm/capi.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitEigensolver = 3;
constexpr int kExitOptimizer = 4;
constexpr int kExitInternal = 1;

int exit_code_for(lecm_status status) {
  switch (status) {
    case LECM_OK:
      return kExitOk;
    case LECM_ERR_EIGENSOLVER:
      return kExitEigensolver;
    case LECM_ERR_OPTIMIZER:
      return kExitOptimizer;
    case LECM_ERR_INTERNAL:
      return kExitInternal;
    default:
      return kExitBadInput;
  }
}

int report_failure(lecm_status status) {
  std::fprintf(stderr, "error: %s\n", lecm_last_error());
  return exit_code_for(status);
}

std::string format_value(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

struct GlobalOptions {
  int sites = 24;
  double j1 = 1.0;
  double j2 = 0.0;
  std::string boundary = "open";
  std::string layout = "single";
  std::uint64_t seed = 0x5EED;
  std::string out;
  int threads = 0;
  int two_sz = 0;
  double tol = 0.0;
  std::string cache_dir = "lecm-cache";

  int32_t boundary_code() const {
    return boundary == "periodic" ? LECM_BOUNDARY_PERIODIC : LECM_BOUNDARY_OPEN;
  }
  int32_t layout_code() const {
    return layout == "two_decoupled" ? LECM_LAYOUT_TWO_DECOUPLED : LECM_LAYOUT_SINGLE;
  }
  lecm_experiment_options experiment(const std::string& plot_script, const std::string& warn_log,
                                     bool allow_even_r, bool use_cache) const {
    lecm_experiment_options options{};
    options.n_sites = sites;
    options.j1 = j1;
    options.boundary = boundary_code();
    options.layout = layout_code();
    options.two_sz = two_sz;
    options.seed = seed;
    options.tol = tol;
    options.allow_even_r = allow_even_r ? 1 : 0;
    options.cache_dir = use_cache && !cache_dir.empty() ? cache_dir.c_str() : nullptr;
    options.plot_script = plot_script.empty() ? nullptr : plot_script.c_str();
    options.warn_log = warn_log.empty() ? nullptr : warn_log.c_str();
    return options;
  }
};

using StatePtr = std::unique_ptr<lecm_state, decltype(&lecm_state_destroy)>;
using PartitionPtr = std::unique_ptr<lecm_partition, decltype(&lecm_partition_destroy)>;
using BsmPtr = std::unique_ptr<lecm_bsm, decltype(&lecm_bsm_destroy)>;
using ReportPtr = std::unique_ptr<lecm_report, decltype(&lecm_report_destroy)>;
using LocPtr = std::unique_ptr<lecm_localization, decltype(&lecm_localization_destroy)>;

// State selection shared by check-optimality and optimize: a built-in demo
// state or the model ground state with a symmetric pair at distance r.
struct StudyOptions {
  std::string demo;
  int r = 1;
  std::vector<int> s1;
  std::vector<int> s2;
  std::string bsm_spec = "canonical";
  double perturb = 0.0;
  double stationarity_tol = 1e-8;
  std::vector<std::string> symmetry;  // empty = pick a default for the state kind
};

int build_study(const GlobalOptions& global, const StudyOptions& study, StatePtr& state,
                PartitionPtr& partition, BsmPtr& bsm) {
  lecm_status status = LECM_OK;
  lecm_state* raw_state = nullptr;
  int n_sites = global.sites;
  std::vector<int32_t> s1, s2;

  if (!study.demo.empty()) {
    status = lecm_demo_state(study.demo.c_str(), global.sites, global.seed, &raw_state);
    if (status != LECM_OK) return report_failure(status);
    s1 = {0};
    s2 = {1};
  } else {
    lecm_experiment_options options = global.experiment("", "", false, true);
    status = lecm_cached_ground_state(&options, global.j2, &raw_state, nullptr);
    if (status != LECM_OK) return report_failure(status);
    int32_t a = 0, b = 0;
    status = lecm_symmetric_pair(global.sites, study.r, &a, &b);
    if (status != LECM_OK) {
      lecm_state_destroy(raw_state);
      return report_failure(status);
    }
    s1 = {a};
    s2 = {b};
  }
  state = StatePtr(raw_state, &lecm_state_destroy);
  if (!study.s1.empty()) s1.assign(study.s1.begin(), study.s1.end());
  if (!study.s2.empty()) s2.assign(study.s2.begin(), study.s2.end());

  lecm_partition* raw_partition = nullptr;
  status = lecm_partition_create(n_sites, s1.data(), static_cast<int32_t>(s1.size()), s2.data(),
                                 static_cast<int32_t>(s2.size()), &raw_partition);
  if (status != LECM_OK) return report_failure(status);
  partition = PartitionPtr(raw_partition, &lecm_partition_destroy);

  lecm_bsm* raw_bsm = nullptr;
  // the chain reflection only resolves degeneracies of mirror-symmetric
  // model partitions; demo states default to the magnetization alone
  int use_sz = 1;
  int use_reflection = study.demo.empty() ? 1 : 0;
  if (!study.symmetry.empty()) {
    use_sz = use_reflection = 0;
    for (const auto& name : study.symmetry) {
      if (name == "env_sz") use_sz = 1;
      else if (name == "env_reflection") use_reflection = 1;
      else if (name != "none") {
        std::fprintf(stderr, "error: unknown symmetry resolver '%s'\n", name.c_str());
        return kExitBadInput;
      }
    }
  }
  if (study.bsm_spec == "canonical")
    status = lecm_bsm_canonical(state.get(), partition.get(), use_sz, use_reflection, &raw_bsm);
  else if (study.bsm_spec == "random")
    status = lecm_bsm_random(state.get(), partition.get(), global.seed, &raw_bsm);
  else
    status = lecm_bsm_load(study.bsm_spec.c_str(), &raw_bsm);
  if (status != LECM_OK) return report_failure(status);
  bsm = BsmPtr(raw_bsm, &lecm_bsm_destroy);

  if (study.perturb != 0.0) {
    status = lecm_bsm_perturb(bsm.get(), study.perturb, global.seed + 1);
    if (status != LECM_OK) return report_failure(status);
  }
  return -1;  // no error
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Localized-entanglement toolkit for j1-j2 spin-1/2 chains"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.set_config("--config", "", "flat key=value configuration file");
  app.add_option("--sites", global.sites, "number of spin-1/2 sites")->capture_default_str();
  app.add_option("--j1", global.j1, "nearest-neighbor coupling")->capture_default_str();
  app.add_option("--j2", global.j2, "next-nearest-neighbor coupling")->capture_default_str();
  app.add_option("--boundary", global.boundary, "open or periodic")
      ->check(CLI::IsMember({"open", "periodic"}))
      ->capture_default_str();
  app.add_option("--layout", global.layout, "single or two_decoupled")
      ->check(CLI::IsMember({"single", "two_decoupled"}))
      ->capture_default_str();
  app.add_option("--seed", global.seed, "random seed")->capture_default_str();
  app.add_option("--out", global.out, "output path");
  app.add_option("--threads", global.threads, "worker threads (0 = default)");
  app.add_option("--two-sz", global.two_sz, "twice the total z-magnetization")
      ->capture_default_str();
  app.add_option("--tol", global.tol, "eigensolver tolerance (0 = default)");
  app.add_option("--cache-dir", global.cache_dir, "ground-state cache directory")
      ->capture_default_str();

  // ground-state
  auto* cmd_gs = app.add_subcommand("ground-state", "compute or load the sector ground state");

  // lecm-sweep
  auto* cmd_sweep =
      app.add_subcommand("lecm-sweep", "canonical entanglement against pair distance");
  std::vector<double> sweep_j2{0.0};
  std::vector<int> sweep_r{1, 3, 5, 7, 9, 11};
  std::string plot_script, warn_log;
  bool allow_even_r = false;
  cmd_sweep->add_option("--j2-list", sweep_j2, "j2 values")->delimiter(',')->capture_default_str();
  cmd_sweep->add_option("--R", sweep_r, "pair distances")->delimiter(',')->capture_default_str();
  cmd_sweep->add_option("--plot-script", plot_script, "write a gnuplot script here");
  cmd_sweep->add_option("--warn-log", warn_log, "sidecar file for skipped placements");
  cmd_sweep->add_flag("--allow-even-r", allow_even_r,
                      "place parity-mismatched distances around the center");

  // entanglement-length
  auto* cmd_length = app.add_subcommand("entanglement-length",
                                        "two-point decay length of the extractable entanglement");
  std::vector<double> length_j2{0.0, 0.1, 0.2, 0.3, 0.4};
  int r1 = 7, r2 = 11;
  cmd_length->add_option("--j2-list", length_j2, "j2 values")->delimiter(',')->capture_default_str();
  cmd_length->add_option("--r1", r1, "first distance")->capture_default_str();
  cmd_length->add_option("--r2", r2, "second distance")->capture_default_str();
  cmd_length->add_option("--plot-script", plot_script, "write a gnuplot script here");

  // decoupled-baseline
  auto* cmd_baseline =
      app.add_subcommand("decoupled-baseline", "cross-chain residual value on two separate chains");
  cmd_baseline->add_option("--j2-list", sweep_j2, "j2 values")->delimiter(',');
  cmd_baseline->add_option("--R", sweep_r, "pair distances")->delimiter(',');
  cmd_baseline->add_option("--warn-log", warn_log, "sidecar file for skipped placements");

  // check-optimality
  auto* cmd_check = app.add_subcommand("check-optimality",
                                       "first-order stationarity audit of a measurement basis");
  StudyOptions study;
  cmd_check->add_option("--demo", study.demo, "built-in state: ghz, w or random");
  cmd_check->add_option("--r", study.r, "symmetric pair distance for model states")
      ->capture_default_str();
  cmd_check->add_option("--s1", study.s1, "first part site list")->delimiter(',');
  cmd_check->add_option("--s2", study.s2, "second part site list")->delimiter(',');
  cmd_check->add_option("--bsm", study.bsm_spec, "canonical, random, or a basis file")
      ->capture_default_str();
  cmd_check->add_option("--perturb", study.perturb, "apply one random rotation of this size");
  cmd_check->add_option("--stationarity-tol", study.stationarity_tol, "stationarity threshold")
      ->capture_default_str();
  cmd_check->add_option("--symmetry", study.symmetry,
                        "degeneracy resolvers: env_sz, env_reflection, none")
      ->delimiter(',');

  // optimize
  auto* cmd_optimize = app.add_subcommand("optimize", "first-order search over measurement bases");
  std::string direction = "max";
  double step_init = 0.01;
  int max_iters = 10000;
  std::string trajectory_path, residuals_path;
  cmd_optimize->add_option("--demo", study.demo, "built-in state: ghz, w or random");
  cmd_optimize->add_option("--r", study.r, "symmetric pair distance for model states");
  cmd_optimize->add_option("--s1", study.s1, "first part site list")->delimiter(',');
  cmd_optimize->add_option("--s2", study.s2, "second part site list")->delimiter(',');
  cmd_optimize->add_option("--start", study.bsm_spec, "canonical, random, or a basis file")
      ->capture_default_str();
  cmd_optimize->add_option("--perturb", study.perturb, "random rotation applied to the start");
  cmd_optimize->add_option("--direction", direction, "max or min")
      ->check(CLI::IsMember({"max", "min"}))
      ->capture_default_str();
  cmd_optimize->add_option("--step", step_init, "initial rotation size")->capture_default_str();
  cmd_optimize->add_option("--max-iters", max_iters, "iteration cap")->capture_default_str();
  cmd_optimize->add_option("--stationarity-tol", study.stationarity_tol, "stationarity threshold");
  cmd_optimize->add_option("--symmetry", study.symmetry,
                           "degeneracy resolvers: env_sz, env_reflection, none")
      ->delimiter(',');
  cmd_optimize->add_option("--trajectory", trajectory_path, "CSV of accepted averages");
  cmd_optimize->add_option("--residuals", residuals_path, "CSV of final pair residuals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  if (global.threads > 0) lecm_set_threads(global.threads);

  if (cmd_gs->parsed()) {
    lecm_experiment_options options = global.experiment("", "", false, true);
    lecm_state* raw_state = nullptr;
    int32_t cache_hit = 0;
    lecm_status status = lecm_cached_ground_state(&options, global.j2, &raw_state, &cache_hit);
    if (status != LECM_OK) return report_failure(status);
    StatePtr state(raw_state, &lecm_state_destroy);
    double energy = 0.0, residual = 0.0;
    int32_t iterations = 0;
    lecm_state_energy(state.get(), &energy);
    lecm_state_residual(state.get(), &residual);
    lecm_state_iterations(state.get(), &iterations);
    if (cache_hit) std::fprintf(stderr, "cache hit\n");
    std::printf("energy = %s\n", format_value(energy).c_str());
    std::printf("residual = %s\n", format_value(residual).c_str());
    std::printf("iterations = %" PRId32 "\n", iterations);
    if (!global.out.empty()) {
      status = lecm_state_save(state.get(), global.out.c_str());
      if (status != LECM_OK) return report_failure(status);
      std::printf("state written to %s\n", global.out.c_str());
    }
    return kExitOk;
  }

  if (cmd_sweep->parsed() || cmd_baseline->parsed()) {
    const bool baseline = cmd_baseline->parsed();
    std::string out = global.out.empty() ? (baseline ? "baseline.csv" : "sweep.csv") : global.out;
    lecm_experiment_options options =
        global.experiment(plot_script, warn_log, allow_even_r, true);
    std::vector<int32_t> r_values(sweep_r.begin(), sweep_r.end());
    int32_t rows = 0;
    lecm_status status =
        baseline ? lecm_run_decoupled_baseline(&options, sweep_j2.data(),
                                               static_cast<int32_t>(sweep_j2.size()),
                                               r_values.data(), static_cast<int32_t>(r_values.size()),
                                               out.c_str(), &rows)
                 : lecm_run_sweep(&options, sweep_j2.data(), static_cast<int32_t>(sweep_j2.size()),
                                  r_values.data(), static_cast<int32_t>(r_values.size()),
                                  out.c_str(), &rows);
    if (status != LECM_OK) return report_failure(status);
    std::printf("wrote %" PRId32 " rows to %s\n", rows, out.c_str());
    return kExitOk;
  }

  if (cmd_length->parsed()) {
    std::string out = global.out.empty() ? "length.csv" : global.out;
    lecm_experiment_options options = global.experiment(plot_script, "", false, true);
    int32_t rows = 0;
    lecm_status status =
        lecm_run_entanglement_length(&options, length_j2.data(),
                                     static_cast<int32_t>(length_j2.size()), r1, r2, out.c_str(),
                                     &rows);
    if (status != LECM_OK) return report_failure(status);
    std::printf("wrote %" PRId32 " rows to %s\n", rows, out.c_str());
    return kExitOk;
  }

  if (cmd_check->parsed()) {
    StatePtr state(nullptr, &lecm_state_destroy);
    PartitionPtr partition(nullptr, &lecm_partition_destroy);
    BsmPtr bsm(nullptr, &lecm_bsm_destroy);
    const int failure = build_study(global, study, state, partition, bsm);
    if (failure >= 0) return failure;

    lecm_report* raw_report = nullptr;
    lecm_status status = lecm_check_optimality(state.get(), partition.get(), bsm.get(),
                                               study.stationarity_tol, &raw_report);
    if (status != LECM_OK) return report_failure(status);
    ReportPtr report(raw_report, &lecm_report_destroy);
    double max_residual = 0.0;
    int32_t stationary = 0;
    lecm_report_max_residual(report.get(), &max_residual);
    lecm_report_stationary(report.get(), &stationary);
    std::printf("max_abs_residual = %s\n", format_value(max_residual).c_str());
    std::printf("stationary = %s\n", stationary ? "true" : "false");
    if (!global.out.empty()) {
      status = lecm_write_residuals_csv(report.get(), global.out.c_str());
      if (status != LECM_OK) return report_failure(status);
      std::printf("residuals written to %s\n", global.out.c_str());
    }
    return kExitOk;
  }

  if (cmd_optimize->parsed()) {
    StatePtr state(nullptr, &lecm_state_destroy);
    PartitionPtr partition(nullptr, &lecm_partition_destroy);
    BsmPtr start(nullptr, &lecm_bsm_destroy);
    const int failure = build_study(global, study, state, partition, start);
    if (failure >= 0) return failure;

    lecm_bsm* raw_final = nullptr;
    lecm_localization* raw_loc = nullptr;
    lecm_report* raw_report = nullptr;
    double* trajectory = nullptr;
    int64_t trajectory_len = 0;
    int32_t stationary = 0;
    lecm_status status = lecm_optimize(
        state.get(), partition.get(), start.get(),
        direction == "min" ? LECM_MINIMIZE : LECM_MAXIMIZE, step_init, study.stationarity_tol,
        max_iters, &raw_final, &raw_loc, &raw_report, &trajectory, &trajectory_len, &stationary);
    if (status != LECM_OK) return report_failure(status);
    BsmPtr final_bsm(raw_final, &lecm_bsm_destroy);
    LocPtr loc(raw_loc, &lecm_localization_destroy);
    ReportPtr report(raw_report, &lecm_report_destroy);

    double average = 0.0, max_residual = 0.0;
    lecm_localization_average(loc.get(), &average);
    lecm_report_max_residual(report.get(), &max_residual);
    std::printf("final_average = %s\n", format_value(average).c_str());
    std::printf("max_abs_residual = %s\n", format_value(max_residual).c_str());
    std::printf("stationary = %s\n", stationary ? "true" : "false");
    std::printf("accepted_steps = %" PRId64 "\n",
                trajectory_len > 0 ? trajectory_len - 1 : 0);

    if (!global.out.empty()) {
      status = lecm_bsm_save(final_bsm.get(), global.out.c_str());
      if (status != LECM_OK) {
        lecm_buffer_destroy(trajectory);
        return report_failure(status);
      }
      std::printf("basis written to %s\n", global.out.c_str());
    }
    if (!trajectory_path.empty() && trajectory) {
      std::FILE* f = std::fopen(trajectory_path.c_str(), "w");
      if (!f) {
        lecm_buffer_destroy(trajectory);
        std::fprintf(stderr, "error: cannot open %s\n", trajectory_path.c_str());
        return kExitBadInput;
      }
      std::fprintf(f, "step,sbar\n");
      for (int64_t i = 0; i < trajectory_len; ++i)
        std::fprintf(f, "%" PRId64 ",%s\n", i, format_value(trajectory[i]).c_str());
      std::fclose(f);
    }
    if (!residuals_path.empty()) {
      status = lecm_write_residuals_csv(report.get(), residuals_path.c_str());
      if (status != LECM_OK) {
        lecm_buffer_destroy(trajectory);
        return report_failure(status);
      }
    }
    lecm_buffer_destroy(trajectory);
    return stationary ? kExitOk : kExitOptimizer;
  }

  return kExitBadInput;
}
