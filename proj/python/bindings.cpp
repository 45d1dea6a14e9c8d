#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lmg/error.hpp"
#include "lmg/experiment.hpp"
#include "lmg/gcm.hpp"
#include "lmg/phase_space.hpp"
#include "lmg/quasi_spin.hpp"
#include "lmg/selftest.hpp"

namespace py = pybind11;

namespace {

lmg::gcm::KernelNormalization normalization_from(const std::string& name) {
  if (name == "exact") return lmg::gcm::KernelNormalization::exact;
  if (name == "published") return lmg::gcm::KernelNormalization::published;
  throw lmg::InvalidArgument("normalization must be 'exact' or 'published'");
}

lmg::gcm::KernelOptions kernel_options(const std::string& normalization) {
  return {normalization_from(normalization), lmg::gcm::Quadrature::automatic, 0};
}

lmg::GapCurve make_curve(std::vector<double> chi, std::vector<double> gap) {
  return {std::move(chi), std::move(gap)};
}

py::dict dataset_dict(const lmg::experiment::FigureDataset& d) {
  py::dict out;
  out["figure"] = d.figure_id;
  out["columns"] = d.columns;
  out["rows"] = d.rows;
  out["metadata"] = d.metadata;
  return out;
}

lmg::experiment::RunConfig config_from(const std::string& text) {
  auto config = lmg::experiment::parse_config(text);
  lmg::experiment::validate(config);
  return config;
}

}  // namespace

PYBIND11_MODULE(_lmgtunnel, m) {
  m.doc() = "LMG model spectra, collective potentials and discrete phase-space dynamics";
  m.attr("__version__") = LMG_VERSION;

  py::register_exception<lmg::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<lmg::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  // quasi-spin model
  m.def("hamiltonian", [](int np, double chi) { return lmg::build_hamiltonian(lmg::QuasiSpinBasis(np), chi).matrix; },
        py::arg("n_particles"), py::arg("chi"));
  m.def(
      "spectrum",
      [](int np, double chi) {
        auto s = lmg::solve_spectrum(lmg::build_hamiltonian(lmg::QuasiSpinBasis(np), chi));
        return py::make_tuple(s.eigenvalues, s.eigenvectors);
      },
      py::arg("n_particles"), py::arg("chi"), "Ascending eigenvalues and eigenvectors (columns).");
  m.def("energy_gap", [](int np, double chi) { return lmg::energy_gap(lmg::QuasiSpinBasis(np), chi); },
        py::arg("n_particles"), py::arg("chi"));
  m.def(
      "gap_curve",
      [](int np, std::vector<double> grid, int workers) {
        return lmg::gap_curve(lmg::QuasiSpinBasis(np), grid, workers).gap_values;
      },
      py::arg("n_particles"), py::arg("chi_grid"), py::arg("workers") = 1);
  m.def(
      "gap_derivatives",
      [](std::vector<double> chi, std::vector<double> gap, int order) {
        return lmg::gap_derivatives(make_curve(std::move(chi), std::move(gap)), order);
      },
      py::arg("chi_grid"), py::arg("gap_values"), py::arg("order"));
  m.def(
      "region_boundaries",
      [](std::vector<double> chi, std::vector<double> gap) {
        const auto b = lmg::detect_region_boundaries(make_curve(std::move(chi), std::move(gap)));
        return py::make_tuple(b.first, b.second);
      },
      py::arg("chi_grid"), py::arg("gap_values"));
  m.def("uniform_grid", &lmg::uniform_grid, py::arg("start"), py::arg("stop"), py::arg("step"));

  // generator-coordinate potential
  m.def("overlap_eigenvalues", [](int np) { return lmg::gcm::overlap_eigenvalues(np).lambda; },
        py::arg("n_particles"));
  m.def(
      "energy_kernel",
      [](double phi, double theta, int np, double chi, const std::string& norm) {
        return lmg::gcm::energy_kernel(phi, theta, np, chi, normalization_from(norm));
      },
      py::arg("phi"), py::arg("theta"), py::arg("n_particles"), py::arg("chi"), py::arg("normalization") = "exact");
  m.def(
      "projected_kernel",
      [](int np, double chi, const std::string& norm) {
        return lmg::gcm::projected_kernel(np, chi, kernel_options(norm)).matrix;
      },
      py::arg("n_particles"), py::arg("chi"), py::arg("normalization") = "exact");
  m.def("default_phi_grid", &lmg::gcm::default_phi_grid, py::arg("n_particles"));
  m.def(
      "extract_potential",
      [](int np, double chi, std::vector<double> phi, const std::string& norm) {
        if (phi.empty()) phi = lmg::gcm::default_phi_grid(np);
        auto curve = lmg::gcm::extract_potential(np, chi, phi, kernel_options(norm));
        return py::make_tuple(curve.phi_grid, curve.values);
      },
      py::arg("n_particles"), py::arg("chi"), py::arg("phi_grid") = std::vector<double>{},
      py::arg("normalization") = "published");
  m.def("potential_large_n", &lmg::gcm::potential_large_n, py::arg("phi"), py::arg("n_particles"), py::arg("chi"));
  m.def(
      "critical_chi",
      [](int np, const std::string& norm) { return lmg::gcm::critical_chi(np, kernel_options(norm)); },
      py::arg("n_particles"), py::arg("normalization") = "published");

  // discrete phase space
  m.def(
      "wigner_from_pure",
      [](const Eigen::VectorXcd& c) { return lmg::phase::wigner_from_pure({c}).values; }, py::arg("coefficients"));
  m.def(
      "wigner_from_density", [](const Eigen::MatrixXcd& rho) { return lmg::phase::wigner_from_density(rho).values; },
      py::arg("rho"));
  m.def(
      "inverse_wigner", [](const Eigen::MatrixXd& w) { return lmg::phase::inverse_wigner({w}); }, py::arg("w"));
  m.def("mapped_hamiltonian", &lmg::phase::mapped_hamiltonian, py::arg("n_particles"), py::arg("chi"));
  m.def("weyl_symbol", &lmg::phase::weyl_symbol, py::arg("operator"));
  m.def(
      "liouvillian", [](int np, double chi) { return lmg::phase::build_liouvillian(np, chi).matrix(); },
      py::arg("n_particles"), py::arg("chi"));
  m.def(
      "overlap_probability",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return lmg::phase::overlap_probability({a}, {b}); },
      py::arg("initial"), py::arg("final"));
  m.def(
      "evolve",
      [](int np, double chi, double dt, int steps, int i, int j, bool symmetric, const std::string& mean_phase) {
        const auto spectrum = lmg::solve_spectrum(lmg::build_hamiltonian(lmg::QuasiSpinBasis(np), chi));
        const auto state = lmg::phase::make_combination(
            spectrum, i, j, symmetric ? lmg::phase::CombinationSign::symmetric : lmg::phase::CombinationSign::antisymmetric);
        lmg::phase::PropagationOptions options;
        options.dt = dt;
        if (mean_phase == "circular") {
          options.mean_phase = lmg::phase::MeanPhaseMode::circular;
        } else if (mean_phase != "linear") {
          throw lmg::InvalidArgument("mean_phase must be 'linear' or 'circular'");
        }
        auto trace = lmg::phase::propagate_series(lmg::phase::wigner_from_pure(state),
                                                  lmg::phase::build_liouvillian(np, chi), dt * steps, options);
        py::dict out;
        out["t"] = trace.times;
        out["P"] = trace.probability;
        out["mean_phase"] = trace.mean_phase;
        out["final"] = trace.final_state.values;
        return out;
      },
      py::arg("n_particles"), py::arg("chi"), py::arg("dt") = 0.1, py::arg("steps") = 1200, py::arg("i") = 0,
      py::arg("j") = 1, py::arg("symmetric") = true, py::arg("mean_phase") = "linear");
  m.def("dominant_angular_frequency", &lmg::phase::dominant_angular_frequency, py::arg("times"), py::arg("signal"));

  // harness
  m.def("default_config", [] { return lmg::experiment::serialize_config({}); });
  m.def(
      "normalize_config", [](const std::string& text) { return lmg::experiment::serialize_config(config_from(text)); },
      py::arg("text"), "Parses, validates and re-serializes a flat key = value config.");
  m.def(
      "run",
      [](const std::string& command, const std::string& text, int workers) {
        namespace ex = lmg::experiment;
        const auto config = config_from(text);
        py::list out;
        if (command == "spectrum") {
          out.append(dataset_dict(ex::cmd_spectrum(config, workers)));
        } else if (command == "gap") {
          auto d = ex::cmd_gap(config, workers);
          out.append(dataset_dict(d.fig2));
          out.append(dataset_dict(d.fig3));
        } else if (command == "potential") {
          out.append(dataset_dict(ex::cmd_potential(config, workers)));
        } else if (command == "evolve") {
          auto d = ex::cmd_evolve(config, workers);
          out.append(dataset_dict(d.fig5));
          out.append(dataset_dict(d.fig6));
        } else {
          throw lmg::InvalidArgument("unknown command '" + command + "'");
        }
        return out;
      },
      py::arg("command"), py::arg("config") = "", py::arg("workers") = 1,
      "Runs spectrum, gap, potential or evolve and returns the figure datasets.");
  m.def(
      "selftest",
      [] {
        const auto r = lmg::run_selftest();
        return py::make_tuple(r.passed(), r.format());
      },
      "(passed, report)");
}
