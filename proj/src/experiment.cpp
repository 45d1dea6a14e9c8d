#include "lmg/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "lmg/error.hpp"
#include "parallel.hpp"

namespace lmg::experiment {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  std::ostringstream msg;
  msg << "invalid value '" << value << "' for " << key;
  throw InvalidArgument(msg.str());
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) bad_value(key, text);
  return value;
}

int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) bad_value(key, text);
  return value;
}

std::vector<std::string_view> split(std::string_view text, std::string_view separators) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find_first_of(separators, pos);
    const auto piece = trim(text.substr(pos, next == std::string_view::npos ? text.size() - pos : next - pos));
    if (!piece.empty()) parts.push_back(piece);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

const char* sign_name(phase::CombinationSign s) { return s == phase::CombinationSign::symmetric ? "s" : "a"; }

const char* mean_phase_name(phase::MeanPhaseMode m) {
  return m == phase::MeanPhaseMode::linear ? "linear" : "circular";
}

const char* kernel_name(gcm::KernelNormalization k) {
  return k == gcm::KernelNormalization::exact ? "exact" : "published";
}

std::vector<double> phi_grid_for(const RunConfig& config) {
  if (config.phi_points == 0) return gcm::default_phi_grid(config.n_particles);
  std::vector<double> grid(static_cast<std::size_t>(config.phi_points));
  const double pi = std::acos(-1.0);
  for (int i = 0; i < config.phi_points; ++i) {
    grid[static_cast<std::size_t>(i)] = -pi + 2.0 * pi * i / (config.phi_points - 1);
  }
  return grid;
}

std::string chi_record(double chi) { return "chi=" + format_double(chi); }

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw InvalidArgument(what); };
  if (c.n_particles < 2 || c.n_particles % 2 != 0) fail("np must be a positive even integer");
  if (!(c.chi.step > 0.0)) fail("chi-step must be positive");
  if (!(c.chi.stop > c.chi.start)) fail("chi-stop must exceed chi-start");
  if (c.chi_list.empty()) fail("chi-list must not be empty");
  if (c.phi_points != 0 && c.phi_points < 3) fail("phi-points must be 0 (automatic) or at least 3");
  if (!(c.dt > 0.0)) fail("dt must be positive");
  if (c.steps < 1) fail("steps must be at least 1");
  const int n = c.n_particles + 1;
  if (c.level_i < 0 || c.level_j < 0 || c.level_i >= n || c.level_j >= n) fail("levels must lie in 0 ... np");
  if (c.level_i == c.level_j) fail("levels must be distinct");
  if (!(c.tolerance > 0.0)) fail("tolerance must be positive");
  if (c.output_dir.empty()) fail("out must not be empty");
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "np") {
    c.n_particles = parse_int(key, value);
  } else if (key == "chi-start") {
    c.chi.start = parse_double(key, value);
  } else if (key == "chi-stop") {
    c.chi.stop = parse_double(key, value);
  } else if (key == "chi-step") {
    c.chi.step = parse_double(key, value);
  } else if (key == "chi-list") {
    c.chi_list.clear();
    for (auto piece : split(value, ", ")) c.chi_list.push_back(parse_double(key, piece));
  } else if (key == "phi-points") {
    c.phi_points = parse_int(key, value);
  } else if (key == "dt") {
    c.dt = parse_double(key, value);
  } else if (key == "steps") {
    c.steps = parse_int(key, value);
  } else if (key == "levels") {
    const auto parts = split(value, ", ");
    if (parts.size() != 2) bad_value(key, value);
    c.level_i = parse_int(key, parts[0]);
    c.level_j = parse_int(key, parts[1]);
  } else if (key == "sign") {
    if (value == "s") {
      c.sign = phase::CombinationSign::symmetric;
    } else if (value == "a") {
      c.sign = phase::CombinationSign::antisymmetric;
    } else {
      bad_value(key, value);
    }
  } else if (key == "out") {
    c.output_dir = std::string(value);
  } else if (key == "mean-phase") {
    if (value == "linear") {
      c.mean_phase = phase::MeanPhaseMode::linear;
    } else if (value == "circular") {
      c.mean_phase = phase::MeanPhaseMode::circular;
    } else {
      bad_value(key, value);
    }
  } else if (key == "kernel") {
    if (value == "exact") {
      c.kernel = gcm::KernelNormalization::exact;
    } else if (value == "published") {
      c.kernel = gcm::KernelNormalization::published;
    } else {
      bad_value(key, value);
    }
  } else if (key == "tolerance") {
    c.tolerance = parse_double(key, value);
  } else {
    throw InvalidArgument("unknown configuration key '" + std::string(key) + "'");
  }
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "np = " << c.n_particles << '\n'
      << "chi-start = " << format_double(c.chi.start) << '\n'
      << "chi-stop = " << format_double(c.chi.stop) << '\n'
      << "chi-step = " << format_double(c.chi.step) << '\n'
      << "chi-list = " << join_doubles(c.chi_list) << '\n'
      << "phi-points = " << c.phi_points << '\n'
      << "dt = " << format_double(c.dt) << '\n'
      << "steps = " << c.steps << '\n'
      << "levels = " << c.level_i << ' ' << c.level_j << '\n'
      << "sign = " << sign_name(c.sign) << '\n'
      << "out = " << c.output_dir << '\n'
      << "mean-phase = " << mean_phase_name(c.mean_phase) << '\n'
      << "kernel = " << kernel_name(c.kernel) << '\n'
      << "tolerance = " << format_double(c.tolerance) << '\n';
  return out.str();
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  for (auto raw : split(text, "\n")) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line '" + std::string(line) + "' is not of the form key = value");
    }
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

int workers_from_env() {
  const char* raw = std::getenv("LMG_WORKERS");
  if (raw == nullptr || *raw == '\0') return 1;
  const int workers = parse_int("LMG_WORKERS", raw);
  if (workers < 1) throw InvalidArgument("LMG_WORKERS must be a positive integer");
  return workers;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_csv(const FigureDataset& data, const RunConfig& config, std::string_view timestamp) {
  const std::string serialized = serialize_config(config);
  std::string config_line;
  for (auto line : split(serialized, "\n")) {
    if (!config_line.empty()) config_line += "; ";
    config_line += line;
  }
  std::ostringstream out;
  out << "# figure: " << data.figure_id << '\n'
      << "# tool: lmg-tunnel " << LMG_VERSION << '\n'
      << "# timestamp: " << timestamp << '\n'
      << "# config: " << config_line << '\n';
  for (const auto& [key, value] : data.metadata) out << "# " << key << ": " << value << '\n';
  for (std::size_t c = 0; c < data.columns.size(); ++c) out << (c ? "," : "") << data.columns[c];
  out << '\n';
  for (const auto& row : data.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  return out.str();
}

std::filesystem::path write_csv(const FigureDataset& data, const RunConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  const auto path = dir / ("fig" + std::to_string(data.figure_id) + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << to_csv(data, config, utc_timestamp());
  if (!out) throw NumericalError("write to " + path.string() + " failed");
  return path;
}

FigureDataset cmd_spectrum(const RunConfig& config, int workers) {
  validate(config);
  const QuasiSpinBasis basis(config.n_particles);
  const auto grid = uniform_grid(config.chi.start, config.chi.stop, config.chi.step);
  std::vector<Eigen::VectorXd> levels(grid.size());
  detail::parallel_for(grid.size(), workers, [&](std::size_t i) {
    levels[i] = solve_spectrum(build_hamiltonian(basis, grid[i])).eigenvalues;
  });

  FigureDataset data{1, {"chi", "level_index", "energy"}, {}, {}};
  data.rows.reserve(grid.size() * static_cast<std::size_t>(basis.dimension()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (Eigen::Index k = 0; k < levels[i].size(); ++k) {
      data.rows.push_back({grid[i], static_cast<double>(k), levels[i](k)});
    }
  }
  data.metadata.emplace_back("n_particles", std::to_string(config.n_particles));
  return data;
}

GapDatasets cmd_gap(const RunConfig& config, int workers) {
  validate(config);
  const QuasiSpinBasis basis(config.n_particles);
  const auto grid = uniform_grid(config.chi.start, config.chi.stop, config.chi.step);
  const GapCurve curve = gap_curve(basis, grid, workers);
  const auto d1 = gap_derivatives(curve, 1);
  const auto d2 = gap_derivatives(curve, 2);
  const auto d3 = gap_derivatives(curve, 3);
  const RegionBoundaries boundaries = detect_region_boundaries(curve);

  FigureDataset fig2{2, {"chi", "gap", "d1", "d2", "d3"}, {}, {}};
  fig2.rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fig2.rows.push_back({grid[i], curve.gap_values[i], d1[i], d2[i], d3[i]});
  }
  fig2.metadata.emplace_back("n_particles", std::to_string(config.n_particles));
  fig2.metadata.emplace_back("boundary_first", format_double(boundaries.first));
  fig2.metadata.emplace_back("boundary_second", format_double(boundaries.second));
  FigureDataset fig3 = fig2;
  fig3.figure_id = 3;
  return {std::move(fig2), std::move(fig3), boundaries};
}

FigureDataset cmd_potential(const RunConfig& config, int workers) {
  validate(config);
  const QuasiSpinBasis basis(config.n_particles);
  const auto phi = phi_grid_for(config);
  const gcm::KernelOptions options{config.kernel, gcm::Quadrature::automatic, 0};
  const auto& chis = config.chi_list;
  std::vector<gcm::PotentialCurve> curves(chis.size());
  std::vector<Eigen::VectorXd> energies(chis.size());
  detail::parallel_for(chis.size(), workers, [&](std::size_t i) {
    curves[i] = gcm::extract_potential(config.n_particles, chis[i], phi, options);
    energies[i] = solve_spectrum(build_hamiltonian(basis, chis[i])).eigenvalues;
  });

  FigureDataset data{4, {"chi", "phi", "V"}, {}, {}};
  data.metadata.emplace_back("n_particles", std::to_string(config.n_particles));
  data.metadata.emplace_back("kernel", kernel_name(config.kernel));
  for (std::size_t i = 0; i < chis.size(); ++i) {
    data.metadata.emplace_back("record", chi_record(chis[i]) + " E0=" + format_double(energies[i](0)) +
                                             " E1=" + format_double(energies[i](1)));
    for (std::size_t p = 0; p < phi.size(); ++p) data.rows.push_back({chis[i], phi[p], curves[i].values[p]});
  }
  return data;
}

EvolveDatasets cmd_evolve(const RunConfig& config, int workers) {
  validate(config);
  const QuasiSpinBasis basis(config.n_particles);
  const auto& chis = config.chi_list;
  const double t_final = config.dt * config.steps;
  phase::PropagationOptions options;
  options.dt = config.dt;
  options.tolerance = config.tolerance;
  options.mean_phase = config.mean_phase;

  std::vector<phase::EvolutionTrace> traces(chis.size());
  std::vector<EvolutionSummary> summary(chis.size());
  detail::parallel_for(chis.size(), workers, [&](std::size_t i) {
    const SpectrumResult spectrum = solve_spectrum(build_hamiltonian(basis, chis[i]));
    const auto state = phase::make_combination(spectrum, config.level_i, config.level_j, config.sign);
    const auto initial = phase::wigner_from_pure(state);
    const auto liouvillian = phase::build_liouvillian(config.n_particles, chis[i]);
    traces[i] = phase::propagate_series(initial, liouvillian, t_final, options);
    const double splitting = std::abs(spectrum.eigenvalues(config.level_j) - spectrum.eigenvalues(config.level_i));
    summary[i] = {chis[i], phase::extract_frequency(traces[i]), 0.5 * splitting};
  });

  EvolveDatasets out;
  out.fig5 = {5, {"chi", "t", "P", "mean_phase"}, {}, {}};
  out.fig5.metadata.emplace_back("n_particles", std::to_string(config.n_particles));
  for (const auto& s : summary) {
    out.fig5.metadata.emplace_back("record", chi_record(s.chi) + " omega=" + format_double(s.omega) +
                                                 " delta_half=" + format_double(s.reference));
  }
  for (std::size_t i = 0; i < chis.size(); ++i) {
    const auto& tr = traces[i];
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      out.fig5.rows.push_back({chis[i], tr.times[k], tr.probability[k], tr.mean_phase[k]});
    }
  }
  out.fig6 = out.fig5;
  out.fig6.figure_id = 6;
  out.summary = std::move(summary);
  return out;
}

}  // namespace lmg::experiment
