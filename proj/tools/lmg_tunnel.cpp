// lmg-tunnel: emits the datasets of the LMG tunneling study as CSV files.
//
//   lmg-tunnel spectrum  -> fig1.csv
//   lmg-tunnel gap       -> fig2.csv, fig3.csv
//   lmg-tunnel potential -> fig4.csv
//   lmg-tunnel evolve    -> fig5.csv, fig6.csv
//   lmg-tunnel selftest
//
// Exit status: 0 success, 1 usage error, 2 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lmg/error.hpp"
#include "lmg/experiment.hpp"
#include "lmg/selftest.hpp"

namespace {

namespace ex = lmg::experiment;

constexpr int kUsage = 1;
constexpr int kNumerical = 2;

// Raw flag values; unset flags keep the file/default value.
struct Overrides {
  std::optional<int> np;
  std::optional<double> chi_start, chi_stop, chi_step, dt, tolerance;
  std::optional<std::string> chi_list, sign, out, mean_phase, kernel, config;
  std::optional<int> steps, phi_points;
  std::vector<int> levels;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--np", o.np, "number of particles (even)");
  cmd->add_option("--chi-start", o.chi_start, "first chi of the sweep");
  cmd->add_option("--chi-stop", o.chi_stop, "last chi of the sweep");
  cmd->add_option("--chi-step", o.chi_step, "chi spacing");
  cmd->add_option("--chi-list", o.chi_list, "comma-separated couplings for potential/evolve");
  cmd->add_option("--phi-points", o.phi_points, "phi grid size (0 = 8 N)");
  cmd->add_option("--dt", o.dt, "time step");
  cmd->add_option("--steps", o.steps, "number of time steps");
  cmd->add_option("--levels", o.levels, "two level indices i j")->expected(2);
  cmd->add_option("--sign", o.sign, "s (symmetric) or a (antisymmetric)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--config", o.config, "flat key = value config file");
  cmd->add_option("--mean-phase", o.mean_phase, "linear or circular");
  cmd->add_option("--kernel", o.kernel, "energy kernel normalization: published or exact");
  cmd->add_option("--tolerance", o.tolerance, "series truncation threshold");
}

ex::RunConfig resolve(const Overrides& o) {
  ex::RunConfig config = o.config ? ex::load_config_file(*o.config) : ex::RunConfig{};
  auto set = [&](const char* key, const auto& value) {
    if (value) ex::apply_setting(config, key, ex::format_double(static_cast<double>(*value)));
  };
  auto set_int = [&](const char* key, const std::optional<int>& value) {
    if (value) ex::apply_setting(config, key, std::to_string(*value));
  };
  auto set_text = [&](const char* key, const std::optional<std::string>& value) {
    if (value) ex::apply_setting(config, key, *value);
  };
  set_int("np", o.np);
  set("chi-start", o.chi_start);
  set("chi-stop", o.chi_stop);
  set("chi-step", o.chi_step);
  set_text("chi-list", o.chi_list);
  set_int("phi-points", o.phi_points);
  set("dt", o.dt);
  set_int("steps", o.steps);
  if (!o.levels.empty()) ex::apply_setting(config, "levels", std::to_string(o.levels[0]) + " " + std::to_string(o.levels[1]));
  set_text("sign", o.sign);
  set_text("out", o.out);
  set_text("mean-phase", o.mean_phase);
  set_text("kernel", o.kernel);
  set("tolerance", o.tolerance);
  ex::validate(config);
  return config;
}

void report(const std::filesystem::path& path) { std::cout << "wrote " << path.string() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LMG model spectra, collective potentials and phase-space tunneling dynamics"};
  app.set_version_flag("--version", std::string("lmg-tunnel ") + LMG_VERSION);
  app.require_subcommand(1);

  Overrides o;
  auto* spectrum = app.add_subcommand("spectrum", "full spectrum over the chi grid (fig1)");
  auto* gap = app.add_subcommand("gap", "gap and its derivatives over the chi grid (fig2, fig3)");
  auto* potential = app.add_subcommand("potential", "collective potentials for the chi list (fig4)");
  auto* evolve = app.add_subcommand("evolve", "phase-space evolution for the chi list (fig5, fig6)");
  auto* selftest = app.add_subcommand("selftest", "run the oracle and invariant checks");
  for (auto* cmd : {spectrum, gap, potential, evolve}) add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (selftest->parsed()) {
      const lmg::SelfTestReport result = lmg::run_selftest();
      std::cout << result.format();
      return result.passed() ? 0 : kNumerical;
    }
    const ex::RunConfig config = resolve(o);
    const int workers = ex::workers_from_env();
    if (spectrum->parsed()) {
      report(ex::write_csv(ex::cmd_spectrum(config, workers), config));
    } else if (gap->parsed()) {
      const auto data = ex::cmd_gap(config, workers);
      report(ex::write_csv(data.fig2, config));
      report(ex::write_csv(data.fig3, config));
      std::printf("region boundaries: chi = %.6f, %.6f\n", data.boundaries.first, data.boundaries.second);
    } else if (potential->parsed()) {
      report(ex::write_csv(ex::cmd_potential(config, workers), config));
    } else if (evolve->parsed()) {
      const auto data = ex::cmd_evolve(config, workers);
      report(ex::write_csv(data.fig5, config));
      report(ex::write_csv(data.fig6, config));
      for (const auto& s : data.summary) {
        std::printf("chi = %-8g omega = %.8f  reference = %.8f\n", s.chi, s.omega, s.reference);
      }
    }
  } catch (const lmg::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const lmg::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return 0;
}
