#pragma once

#include <optional>
#include <string>

#include "lecm/engine.hpp"
#include "lecm/first_order.hpp"

namespace lecm {

struct ExperimentConfig {
  ModelParams model{24, 1.0, 0.0, Boundary::open, ChainLayout::single};
  std::vector<int> r_values{1, 3, 5, 7, 9, 11};
  std::vector<double> j2_values{0.0};
  int two_sz = 0;
  std::uint64_t seed = 0x5EED;
  double tol = 1e-12;
  std::string cache_dir;  // empty disables the ground-state cache
  bool allow_even_r = false;
  std::vector<std::string> symmetry_resolution{"env_sz", "env_reflection"};

  void validate() const;
};

struct SweepRow {
  double j2 = 0.0;
  int r = 0;
  double sbar = 0.0;
  double lambda_s = 0.0;
  double lambda_t = 0.0;
  double delta_sbar = 0.0;  // sbar - 0.5, the residual-subtracted gain
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (j2, r)
  std::vector<std::string> warnings;
};

struct LengthEstimate {
  double j2 = 0.0;
  int r1 = 7;
  int r2 = 11;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double xi = std::numeric_limits<double>::quiet_NaN();  // NaN = undefined
};

/// Ground state of the configured model at one j2, consulting the binary cache
/// when a directory is configured. cache_hit reports whether the state was loaded.
GroundStateResult cached_ground_state(const ExperimentConfig& config, double j2,
                                      bool* cache_hit = nullptr);

/// Canonical average entropy of symmetrically placed site pairs against
/// distance, one row per (j2, r).
SweepResult run_lecm_sweep(const ExperimentConfig& config);

/// Two-point decay-length estimates per j2 from the residual-subtracted sweep.
std::vector<LengthEstimate> run_entanglement_length(const ExperimentConfig& config, int r1, int r2);

/// Cross-chain baseline on two decoupled chains; every symmetric placement
/// takes one site from each chain.
SweepResult run_decoupled_baseline(const ExperimentConfig& config);

// --- state cache -----------------------------------------------------------

struct CachedStateHeader {
  ModelParams model;
  int two_sz = 0;
  std::uint64_t seed = 0;
};

std::string cache_file_name(const ModelParams& model, int two_sz, std::uint64_t seed);
void save_state(const GroundStateResult& gs, const ModelParams& model, int two_sz,
                std::uint64_t seed, const std::string& path);
GroundStateResult load_state(const std::string& path, const ModelParams* expect_model = nullptr,
                             const int* expect_two_sz = nullptr,
                             const std::uint64_t* expect_seed = nullptr,
                             CachedStateHeader* header = nullptr);

// --- text outputs -----------------------------------------------------------

std::string format_double(double value);  // 12 significant digits, '.' decimal
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);
void write_length_csv(const std::vector<LengthEstimate>& rows, const std::string& path);
void write_residuals_csv(const OptimalityReport& report, const std::string& path);
void write_lines(const std::vector<std::string>& lines, const std::string& path);
void write_sweep_plot_script(const std::string& csv_path, const std::vector<double>& j2_values,
                             const std::string& path);
void write_length_plot_script(const std::string& csv_path, const std::string& path);

// --- built-in demo states ---------------------------------------------------

/// "ghz", "w" or "random" (normalized real Gaussian over the full basis).
StateVector demo_state(const std::string& name, int n_sites, std::uint64_t seed);

}  // namespace lecm
