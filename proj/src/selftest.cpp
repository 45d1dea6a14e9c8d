#include "lmg/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lmg/experiment.hpp"
#include "lmg/gcm.hpp"
#include "lmg/phase_space.hpp"

namespace lmg {

namespace {

using cplx = std::complex<double>;

// General eigensolver so that an asymmetric (broken) matrix is not silently
// symmetrized from one triangle.
std::vector<cplx> sorted_eigenvalues(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  std::vector<cplx> e(solver.eigenvalues().data(), solver.eigenvalues().data() + a.rows());
  std::sort(e.begin(), e.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return e;
}

std::string tagged(const std::string& name, int np, double chi) {
  return name + " [np=" + std::to_string(np) + " chi=" + experiment::format_double(chi) + "]";
}

std::string tagged(const std::string& name, int np) { return name + " [np=" + std::to_string(np) + "]"; }

Eigen::MatrixXcd random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd g(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
  }
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

bool SelfTestReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelfTestCheck& c) { return c.passed; });
}

std::string SelfTestReport::format() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    char line[256];
    std::snprintf(line, sizeof line, "%s  %-52s residual %.3e  tolerance %.1e\n", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.residual, c.tolerance);
    out << line;
  }
  const auto failed = std::count_if(checks.begin(), checks.end(), [](const SelfTestCheck& c) { return !c.passed; });
  out << (failed == 0 ? "all " + std::to_string(checks.size()) + " checks passed\n"
                      : std::to_string(failed) + " of " + std::to_string(checks.size()) + " checks failed\n");
  return out.str();
}

SelfTestReport run_selftest(const HamiltonianBuilder& builder) {
  SelfTestReport report;
  auto add = [&](std::string name, double tolerance, double residual) {
    const bool ok = std::isfinite(residual) && residual <= tolerance;
    report.checks.push_back({std::move(name), tolerance, residual, ok});
  };
  const std::vector<double> chis{0.0, 1.2, 2.5};
  std::mt19937_64 rng(20240521);

  for (int np : {2, 4, 10}) {
    const QuasiSpinBasis basis(np);
    const int n = basis.dimension();

    for (double chi : chis) {
      const Eigen::MatrixXd h = builder(basis, chi).matrix;
      add(tagged("hamiltonian symmetric", np, chi), 1e-12, (h - h.transpose()).cwiseAbs().maxCoeff());

      double cross = 0.0;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if ((basis.m_label(a) - basis.m_label(b)) % 2 != 0) cross = std::max(cross, std::abs(h(a, b)));
        }
      }
      add(tagged("parity blocks decouple", np, chi), 0.0, cross);

      const auto e = sorted_eigenvalues(h);
      double reflection = 0.0;
      for (int k = 0; k < n; ++k) reflection = std::max(reflection, std::abs(e[k] + e[n - 1 - k]));
      add(tagged("spectrum symmetric about zero", np, chi), 1e-10, reflection);

      const auto kernel = gcm::projected_kernel(np, chi, {gcm::KernelNormalization::exact});
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gcm_solver(kernel.matrix, Eigen::EigenvaluesOnly);
      double oracle = 0.0;
      for (int k = 0; k < n; ++k) oracle = std::max(oracle, std::abs(e[k] - gcm_solver.eigenvalues()(k)));
      add(tagged("projected kernel reproduces spectrum", np, chi), 1e-8, oracle);
    }

    {
      const auto e = sorted_eigenvalues(builder(basis, 0.0).matrix);
      add(tagged("gap at zero coupling", np), 1e-12, std::abs((e[1] - e[0]) - 1.0));
    }

    {
      const auto lambda = gcm::overlap_eigenvalues(np);
      const int points = 4 * (np + 2);
      double worst = 0.0;
      for (int m = -np / 2; m <= np / 2; ++m) {
        cplx sum = 0.0;
        for (int p = 0; p < points; ++p) {
          const double a = -std::numbers::pi + 2.0 * std::numbers::pi * p / points;
          sum += gcm::coherent_overlap(a, 0.0, np) * std::polar(1.0, -m * a);
        }
        sum *= 2.0 * std::numbers::pi / points;
        worst = std::max(worst, std::abs(sum - lambda(m)) / lambda(m));
      }
      add(tagged("overlap eigenvalues match quadrature", np), 1e-12, worst);
    }

    {
      double round_trip = 0.0;
      double normalization = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXcd rho = random_density(n, rng);
        const auto w = phase::wigner_from_density(rho);
        round_trip = std::max(round_trip, (phase::inverse_wigner(w) - rho).cwiseAbs().maxCoeff());
        normalization = std::max(normalization, std::abs(w.values.sum() - 1.0));
      }
      add(tagged("wigner round trip", np), 1e-12, round_trip);
      add(tagged("wigner normalization", np), 1e-12, normalization);
    }

    {
      const double chi = 1.2;
      const SpectrumResult spectrum = solve_spectrum(build_hamiltonian(basis, chi));
      const auto liouvillian = phase::build_liouvillian(np, chi);
      const phase::StateCoefficients ground{spectrum.eigenvectors.col(0).cast<cplx>()};
      const auto w0 = phase::wigner_from_pure(ground);
      add(tagged("liouvillian annihilates eigenstates", np), 1e-10,
          liouvillian.apply(w0.values).cwiseAbs().maxCoeff());

      const auto state = phase::make_combination(spectrum, 0, 1, phase::CombinationSign::symmetric);
      phase::PropagationOptions options;
      const auto trace = phase::propagate_series(phase::wigner_from_pure(state), liouvillian, 10.0, options);
      double worst = 0.0;
      for (std::size_t k = 0; k < trace.times.size(); ++k) {
        const auto evolved = phase::propagate_exact(state, spectrum, trace.times[k]);
        const double exact = std::norm(state.coeffs.dot(evolved.coeffs));
        worst = std::max(worst, std::abs(exact - trace.probability[k]));
      }
      add(tagged("series propagation matches eigenbasis", np), 1e-6, worst);
    }

    if (np >= 4) {
      const double chi = 1.0;
      const Eigen::MatrixXd symbol = phase::weyl_symbol(build_hamiltonian(basis, chi).matrix);
      add(tagged("weyl symbol matches mapped hamiltonian", np), 1e-10,
          (symbol - phase::mapped_hamiltonian(np, chi)).cwiseAbs().maxCoeff());
    }
  }
  return report;
}

}  // namespace lmg
