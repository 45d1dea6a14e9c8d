#ifndef LMG_EXPERIMENT_HPP
#define LMG_EXPERIMENT_HPP

// Sweep harness behind the lmg-tunnel tool: run configuration, datasets and
// their CSV form.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lmg/gcm.hpp"
#include "lmg/phase_space.hpp"

namespace lmg::experiment {

struct ChiRange {
  double start = 0.0;
  double stop = 3.0;
  double step = 0.005;

  friend bool operator==(const ChiRange&, const ChiRange&) = default;
};

struct RunConfig {
  int n_particles = 10;
  ChiRange chi;
  /// Couplings for the potential and evolution runs.
  std::vector<double> chi_list{0.0, 1.2, 1.8, 2.5};
  /// Points of the phi grid; 0 selects 8 N.
  int phi_points = 0;
  double dt = 0.1;
  int steps = 1200;
  int level_i = 0;
  int level_j = 1;
  phase::CombinationSign sign = phase::CombinationSign::symmetric;
  std::string output_dir = ".";
  phase::MeanPhaseMode mean_phase = phase::MeanPhaseMode::linear;
  gcm::KernelNormalization kernel = gcm::KernelNormalization::published;
  /// Truncation threshold of the exponential series.
  double tolerance = 1e-12;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws InvalidArgument naming the first violated constraint.
void validate(const RunConfig& config);

/// Flat "key = value" lines, one per field, keys spelled like the CLI flags
/// (np, chi-start, chi-stop, chi-step, chi-list, phi-points, dt, steps,
/// levels, sign, out, mean-phase, kernel, tolerance). Doubles use 17
/// significant digits so that parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Applies the keys found in `text` on top of `base`. Blank lines and lines
/// starting with '#' are skipped. Unknown keys and malformed values throw
/// InvalidArgument. The result is not validated.
RunConfig parse_config(std::string_view text, RunConfig base = {});

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Single-key setter shared by the file parser and the CLI.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Worker count from the LMG_WORKERS environment variable (default 1).
/// Throws InvalidArgument if it is set but not a positive integer.
int workers_from_env();

std::string format_double(double value);

struct FigureDataset {
  int figure_id = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Emitted as "# key: value" lines in insertion order.
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Header lines (# figure, # tool, # timestamp, # config, metadata), the
/// column line, then one comma-separated row per record. Everything except
/// the timestamp line is a pure function of the dataset and the config.
std::string to_csv(const FigureDataset& data, const RunConfig& config, std::string_view timestamp);

/// Writes fig<id>.csv into config.output_dir (created if missing) and
/// returns its path.
std::filesystem::path write_csv(const FigureDataset& data, const RunConfig& config);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

/// fig1: chi, level_index, energy.
FigureDataset cmd_spectrum(const RunConfig& config, int workers = 1);

struct GapDatasets {
  /// fig2 and fig3 carry the same columns (chi, gap, d1, d2, d3) and the
  /// detected boundaries as metadata.
  FigureDataset fig2;
  FigureDataset fig3;
  RegionBoundaries boundaries;
};

GapDatasets cmd_gap(const RunConfig& config, int workers = 1);

/// fig4: chi, phi, V, with one "record" metadata entry per chi holding the
/// two lowest LMG energies.
FigureDataset cmd_potential(const RunConfig& config, int workers = 1);

struct EvolutionSummary {
  double chi;
  double omega;
  /// Delta(chi)/2 from the spectrum.
  double reference;
};

struct EvolveDatasets {
  /// fig5 and fig6 share the columns chi, t, P, mean_phase.
  FigureDataset fig5;
  FigureDataset fig6;
  std::vector<EvolutionSummary> summary;
};

EvolveDatasets cmd_evolve(const RunConfig& config, int workers = 1);

}  // namespace lmg::experiment

#endif  // LMG_EXPERIMENT_HPP
