#include "lecm/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lecm/density.hpp"
#include "lecm/first_order.hpp"

namespace lecm {

namespace {

constexpr char kMagic[8] = {'L', 'E', 'C', 'M', 'S', 'T', 'A', 'T'};
constexpr std::uint8_t kVersion = 1;

std::string sanitize_number(double v) {
  std::string s = format_double(v);
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
    if (c == '+') c = ' ';
  }
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
}

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  if (r_values.empty()) fail(Errc::invalid_argument, "at least one distance is required");
  for (int r : r_values)
    if (r < 1 || r >= model.n_sites) fail(Errc::invalid_argument, "distance out of range");
  for (double j2 : j2_values)
    if (!std::isfinite(j2)) fail(Errc::invalid_argument, "j2 values must be finite");
  if ((model.n_sites + two_sz) % 2 != 0 || std::abs(two_sz) > model.n_sites)
    fail(Errc::invalid_argument, "two_sz incompatible with n_sites");
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string cache_file_name(const ModelParams& model, int two_sz, std::uint64_t seed) {
  std::ostringstream name;
  name << "gs_n" << model.n_sites << "_sz" << (two_sz < 0 ? "m" : "") << std::abs(two_sz) << "_"
       << (model.boundary == Boundary::open ? "open" : "periodic")
       << (model.layout == ChainLayout::two_decoupled ? "_split" : "") << "_j1"
       << sanitize_number(model.j1) << "_j2" << sanitize_number(model.j2) << "_seed" << seed
       << ".state";
  return name.str();
}

void save_state(const GroundStateResult& gs, const ModelParams& model, int two_sz,
                std::uint64_t seed, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::int32_t>(model.n_sites));
  write_pod(out, static_cast<std::int32_t>(two_sz));
  write_pod(out, static_cast<std::uint8_t>(model.boundary));
  write_pod(out, static_cast<std::uint8_t>(model.layout));
  write_pod(out, model.j1);
  write_pod(out, model.j2);
  write_pod(out, seed);
  write_pod(out, gs.energy);
  write_pod(out, gs.residual_norm);
  write_pod(out, static_cast<std::int32_t>(gs.iterations));
  const auto& amps = gs.vector.real_amplitudes();
  write_pod(out, static_cast<std::uint64_t>(amps.size()));
  out.write(reinterpret_cast<const char*>(amps.data()),
            static_cast<std::streamsize>(sizeof(double) * amps.size()));
  if (!out) fail(Errc::io, "failed while writing " + path);
}

GroundStateResult load_state(const std::string& path, const ModelParams* expect_model,
                             const int* expect_two_sz, const std::uint64_t* expect_seed,
                             CachedStateHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  std::uint8_t version = 0;
  read_pod(in, version);
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || version != kVersion)
    fail(Errc::io, path + " is not a state cache file of a supported version");

  std::int32_t n_sites = 0, two_sz = 0, iterations = 0;
  std::uint8_t boundary = 0, layout = 0;
  double j1 = 0, j2 = 0, energy = 0, residual = 0;
  std::uint64_t seed = 0, dim = 0;
  read_pod(in, n_sites);
  read_pod(in, two_sz);
  read_pod(in, boundary);
  read_pod(in, layout);
  read_pod(in, j1);
  read_pod(in, j2);
  read_pod(in, seed);
  read_pod(in, energy);
  read_pod(in, residual);
  read_pod(in, iterations);
  read_pod(in, dim);
  if (!in) fail(Errc::io, path + " is truncated");

  if (expect_model &&
      (expect_model->n_sites != n_sites || expect_model->j1 != j1 || expect_model->j2 != j2 ||
       static_cast<std::uint8_t>(expect_model->boundary) != boundary ||
       static_cast<std::uint8_t>(expect_model->layout) != layout))
    fail(Errc::io, path + " was computed for different model parameters");
  if (expect_two_sz && *expect_two_sz != two_sz)
    fail(Errc::io, path + " was computed for a different magnetization sector");
  if (expect_seed && *expect_seed != seed)
    fail(Errc::io, path + " was computed with a different seed");
  if (header) {
    header->model = ModelParams{n_sites, j1, j2, static_cast<Boundary>(boundary),
                                static_cast<ChainLayout>(layout)};
    header->two_sz = two_sz;
    header->seed = seed;
  }

  auto sector = BasisSector::magnetization(n_sites, two_sz);
  if (sector->size() != dim) fail(Errc::io, path + " dimension mismatch");
  Eigen::VectorXd amps(dim);
  in.read(reinterpret_cast<char*>(amps.data()),
          static_cast<std::streamsize>(sizeof(double) * dim));
  if (!in) fail(Errc::io, path + " is truncated");
  if (std::abs(amps.norm() - 1.0) > 1e-8) fail(Errc::io, path + " holds an unnormalized state");
  amps.normalize();
  return {energy, StateVector::real(std::move(sector), std::move(amps)), iterations, residual};
}

GroundStateResult cached_ground_state(const ExperimentConfig& config, double j2, bool* cache_hit) {
  ModelParams model = config.model;
  model.j2 = j2;
  if (cache_hit) *cache_hit = false;
  std::string path;
  if (!config.cache_dir.empty()) {
    std::filesystem::create_directories(config.cache_dir);
    path = (std::filesystem::path(config.cache_dir) / cache_file_name(model, config.two_sz, config.seed))
               .string();
    if (std::filesystem::exists(path)) {
      if (cache_hit) *cache_hit = true;
      const std::uint64_t seed = config.seed;
      return load_state(path, &model, &config.two_sz, &seed);
    }
  }
  LanczosOptions options;
  options.seed = config.seed;
  options.tol = config.tol;
  auto gs = ground_state(model, BasisSector::magnetization(model.n_sites, config.two_sz), options);
  if (!path.empty()) save_state(gs, model, config.two_sz, config.seed, path);
  return gs;
}

SweepResult run_lecm_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult result;
  std::vector<double> j2_values = config.j2_values;
  std::sort(j2_values.begin(), j2_values.end());
  j2_values.erase(std::unique(j2_values.begin(), j2_values.end()), j2_values.end());
  std::vector<int> r_values = config.r_values;
  std::sort(r_values.begin(), r_values.end());
  r_values.erase(std::unique(r_values.begin(), r_values.end()), r_values.end());

  for (double j2 : j2_values) {
    const GroundStateResult gs = cached_ground_state(config, j2);
    for (int r : r_values) {
      auto pair = symmetric_pair(config.model.n_sites, r);
      if (!pair) {
        if (config.allow_even_r) {
          pair = centered_pair(config.model.n_sites, r);
        } else {
          std::ostringstream warning;
          warning << "skipped R=" << r << " at j2=" << format_double(j2)
                  << ": no mirror-symmetric placement on " << config.model.n_sites << " sites";
          result.warnings.push_back(warning.str());
          continue;
        }
      }
      const DensityMatrix rho =
          reduced_density_matrix(gs.vector, {pair->first, pair->second});
      const TwoSiteLecm two_site = two_site_lecm_spin_half(rho);
      result.rows.push_back({j2, r, two_site.sbar, two_site.lambda_s, two_site.lambda_t,
                             two_site.sbar - 0.5});
    }
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.j2 != b.j2) return a.j2 < b.j2;
    return a.r < b.r;
  });
  return result;
}

std::vector<LengthEstimate> run_entanglement_length(const ExperimentConfig& config, int r1,
                                                    int r2) {
  if (r1 == r2) fail(Errc::invalid_argument, "the two distances must differ");
  ExperimentConfig two_point = config;
  two_point.r_values = {r1, r2};
  const SweepResult sweep = run_lecm_sweep(two_point);

  std::vector<LengthEstimate> estimates;
  for (double j2 : config.j2_values) {
    LengthEstimate estimate;
    estimate.j2 = j2;
    estimate.r1 = r1;
    estimate.r2 = r2;
    const SweepRow* row1 = nullptr;
    const SweepRow* row2 = nullptr;
    for (const auto& row : sweep.rows) {
      if (row.j2 == j2 && row.r == r1) row1 = &row;
      if (row.j2 == j2 && row.r == r2) row2 = &row;
    }
    if (!row1 || !row2) fail(Errc::invalid_argument, "no symmetric placement at the requested distances");
    estimate.delta1 = row1->delta_sbar;
    estimate.delta2 = row2->delta_sbar;
    if (estimate.delta1 > 0.0 && estimate.delta2 > 0.0 && estimate.delta1 != estimate.delta2) {
      const double inv_xi =
          -(std::log(estimate.delta1) - std::log(estimate.delta2)) / (r1 - r2);
      if (inv_xi != 0.0) estimate.xi = 1.0 / inv_xi;
    }
    estimates.push_back(estimate);
  }
  return estimates;
}

SweepResult run_decoupled_baseline(const ExperimentConfig& config) {
  ExperimentConfig baseline = config;
  baseline.model.layout = ChainLayout::two_decoupled;
  return run_lecm_sweep(baseline);
}

void write_lines(const std::vector<std::string>& lines, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io, "cannot open " + path + " for writing");
  for (const auto& line : lines) out << line << "\n";
  if (!out) fail(Errc::io, "failed while writing " + path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::vector<std::string> lines{"j2,R,sbar,lambda_s,lambda_t,delta_sbar"};
  for (const auto& row : rows) {
    std::ostringstream line;
    line << format_double(row.j2) << ',' << row.r << ',' << format_double(row.sbar) << ','
         << format_double(row.lambda_s) << ',' << format_double(row.lambda_t) << ','
         << format_double(row.delta_sbar);
    lines.push_back(line.str());
  }
  write_lines(lines, path);
}

void write_length_csv(const std::vector<LengthEstimate>& rows, const std::string& path) {
  std::vector<std::string> lines{"j2,r1,r2,delta1,delta2,xi"};
  for (const auto& row : rows) {
    std::ostringstream line;
    line << format_double(row.j2) << ',' << row.r1 << ',' << row.r2 << ','
         << format_double(row.delta1) << ',' << format_double(row.delta2) << ','
         << format_double(row.xi);
    lines.push_back(line.str());
  }
  write_lines(lines, path);
}

void write_residuals_csv(const OptimalityReport& report, const std::string& path) {
  std::vector<std::string> lines{"i,j,p_i,p_j,sbar1"};
  const int count = static_cast<int>(report.pair_slopes.rows());
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) {
      std::ostringstream line;
      line << i << ',' << j << ',' << format_double(report.probabilities(i)) << ','
           << format_double(report.probabilities(j)) << ','
           << format_double(report.pair_slopes(i, j));
      lines.push_back(line.str());
    }
  write_lines(lines, path);
}

void write_sweep_plot_script(const std::string& csv_path, const std::vector<double>& j2_values,
                             const std::string& path) {
  std::vector<std::string> lines;
  lines.push_back("set datafile separator ','");
  lines.push_back("set xlabel 'R'");
  lines.push_back("set ylabel 'average entropy'");
  lines.push_back("set key top right");
  std::ostringstream plot;
  plot << "plot ";
  for (std::size_t i = 0; i < j2_values.size(); ++i) {
    if (i) plot << ", ";
    const std::string j2 = format_double(j2_values[i]);
    plot << "'" << csv_path << "' using 2:(abs($1-" << j2
         << ")<1e-12 ? $3 : 1/0) with linespoints title 'j2=" << j2 << "'";
  }
  lines.push_back(plot.str());
  write_lines(lines, path);
}

void write_length_plot_script(const std::string& csv_path, const std::string& path) {
  write_lines({"set datafile separator ','", "set xlabel 'j2'", "set ylabel 'xi_E'",
               "plot '" + csv_path + "' using 1:6 with linespoints title 'entanglement length'"},
              path);
}

StateVector demo_state(const std::string& name, int n_sites, std::uint64_t seed) {
  if (n_sites < 2 || n_sites > 20) fail(Errc::invalid_argument, "demo states support 2..20 sites");
  if (name == "ghz") {
    const double amp = 1.0 / std::sqrt(2.0);
    return make_full_state(
        n_sites, {{0, amp}, {(std::uint64_t{1} << n_sites) - 1, amp}});
  }
  if (name == "w") {
    std::vector<std::pair<std::uint64_t, Complex>> amps;
    const double amp = 1.0 / std::sqrt(static_cast<double>(n_sites));
    for (int site = 0; site < n_sites; ++site) amps.push_back({std::uint64_t{1} << site, amp});
    return make_full_state(n_sites, amps);
  }
  if (name == "random") {
    auto sector = BasisSector::full(n_sites);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(sector->size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
    v.normalize();
    return StateVector::real(std::move(sector), std::move(v));
  }
  fail(Errc::invalid_argument, "unknown demo state: " + name + " (expected ghz, w or random)");
}

}  // namespace lecm
