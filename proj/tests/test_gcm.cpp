#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lmg/error.hpp"
#include "lmg/gcm.hpp"
#include "oracles.hpp"

using namespace lmg::gcm;
using std::numbers::pi;

namespace {

Eigen::VectorXd kernel_eigenvalues(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(h, Eigen::EigenvaluesOnly);
  return s.eigenvalues();
}

double curvature_at_zero(int np, double chi, KernelNormalization norm) {
  const double h = pi / (4.0 * (np + 1));
  const auto v = extract_potential(np, chi, {-h, 0.0, h}, {norm}).values;
  return (v[0] - 2.0 * v[1] + v[2]) / (h * h);
}

}  // namespace

TEST_CASE("coherent overlap") {
  for (int np : {2, 10, 40}) {
    CHECK(coherent_overlap(0.7, 0.7, np) == doctest::Approx(1.0));
    CHECK(std::abs(coherent_overlap(pi / 2, -pi / 2, np)) < 1e-15);
  }
  CHECK(coherent_overlap(pi / 2, 0.0, 2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("overlap eigenvalues") {
  const auto l2 = overlap_eigenvalues(2);
  CHECK(l2(0) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(l2(1) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(l2(-1) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(l2(0) / l2(1) == doctest::Approx(2.0).epsilon(1e-15));
  for (int np = 2; np <= 20; np += 2) {
    const auto l = overlap_eigenvalues(np);
    for (int m = -np / 2; m <= np / 2; ++m) {
      CHECK(l(m) > 0.0);
      CHECK(l(m) == doctest::Approx(l(-m)).epsilon(1e-14));
      CHECK(l(m) <= l(0));
      CHECK(std::abs(l(m) / oracle::overlap_lambda(np, m) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("energy kernel") {
  for (double chi : {0.0, 1.0, 2.5}) {
    CHECK(energy_kernel(0.0, 0.0, 10, chi) == doctest::Approx(-5.0).epsilon(1e-15));
    CHECK(energy_kernel(0.0, 0.0, 10, chi, KernelNormalization::published) == doctest::Approx(-5.0).epsilon(1e-15));
  }
  CHECK(energy_kernel(pi / 2, 0.0, 10, 1.0, KernelNormalization::published) == doctest::Approx(-2.5).epsilon(1e-15));
  CHECK(energy_kernel(pi / 2, 0.0, 10, 1.0, KernelNormalization::exact) == doctest::Approx(-2.25).epsilon(1e-15));
  // Finite at the endpoints of the theta range.
  CHECK(std::isfinite(energy_kernel(0.3, pi, 2, 1.0)));
  // Agrees with the raw product form away from its singular lines.
  for (double ap : {-2.0, -0.4, 0.9, 2.7}) {
    for (double a : {-1.1, 0.2, 1.5}) {
      const double phi = 0.5 * (ap + a);
      const double theta = ap - a;
      if (std::abs(theta) > pi) continue;
      CHECK(energy_kernel(phi, theta, 10, 1.3) == doctest::Approx(oracle::raw_energy_kernel(ap, a, 10, 1.3, 9.0)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(energy_kernel(3.5, 0.0, 10, 1.0), lmg::InvalidArgument);
  CHECK_THROWS_AS(energy_kernel(0.0, -3.5, 10, 1.0), lmg::InvalidArgument);
}

TEST_CASE("projected kernel") {
  SUBCASE("matches brute-force quadrature in the original angles") {
    for (int np : {2, 4, 10}) {
      for (double chi : {0.0, 1.2}) {
        const auto k = projected_kernel(np, chi).matrix;
        CHECK((k - oracle::projected_kernel(np, chi, np - 1.0)).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
  SUBCASE("oracle equivalence with the LMG spectrum") {
    for (int np : {2, 4, 10}) {
      for (double chi : {0.0, 0.5, 1.2, 1.8, 2.5}) {
        const auto k = projected_kernel(np, chi);
        CHECK((k.matrix - k.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((kernel_eigenvalues(k.matrix) - oracle::lmg_spectrum(np, chi)).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }
  SUBCASE("published normalization is the LMG spectrum at a rescaled coupling") {
    for (int np : {4, 10}) {
      const double chi = 1.2;
      const auto k = projected_kernel(np, chi, {KernelNormalization::published});
      const auto e = oracle::lmg_spectrum(np, chi * np / (np - 1.0));
      CHECK((kernel_eigenvalues(k.matrix) - e).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  SUBCASE("quadrature modes and refinement agree") {
    for (int np : {4, 10, 20}) {
      const auto base = projected_kernel(np, 1.8, {KernelNormalization::exact, Quadrature::trapezoid}).matrix;
      const auto doubled =
          projected_kernel(np, 1.8, {KernelNormalization::exact, Quadrature::trapezoid, 8 * (np + 2)}).matrix;
      const auto analytic = projected_kernel(np, 1.8, {KernelNormalization::exact, Quadrature::analytic_theta}).matrix;
      const double tol = np <= 10 ? 1e-12 : 1e-8;
      CHECK((base - doubled).cwiseAbs().maxCoeff() < tol);
      CHECK((base - analytic).cwiseAbs().maxCoeff() < tol);
    }
  }
  SUBCASE("large particle numbers stay exact") {
    for (int np : {50, 100}) {
      const auto k = projected_kernel(np, 1.7);
      CHECK((kernel_eigenvalues(k.matrix) - oracle::lmg_spectrum(np, 1.7)).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  CHECK_THROWS_AS(projected_kernel(10, 1.0, {KernelNormalization::exact, Quadrature::trapezoid, 12}),
                  lmg::InvalidArgument);
}

TEST_CASE("angle kernel") {
  for (double chi : {0.0, 1.2}) {
    const auto pk = projected_kernel(10, chi);
    const auto ak = angle_kernel(pk);
    CHECK(ak.theta_grid.size() == 11);
    CHECK(ak.theta_grid[5] == 0.0);
    CHECK((ak.matrix - ak.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((kernel_eigenvalues(ak.matrix) - kernel_eigenvalues(pk.matrix)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(ak.matrix.trace() - pk.matrix.trace()) < 1e-10);
  }
  // Without the interaction only neighbouring generator labels couple.
  const auto pk = projected_kernel(10, 0.0).matrix;
  for (int i = 0; i < 11; ++i) {
    for (int k = 0; k < 11; ++k) {
      if (std::abs(i - k) != 1) CHECK(std::abs(pk(i, k)) < 1e-12);
    }
  }
}

TEST_CASE("collective potential") {
  SUBCASE("even in phi") {
    for (auto norm : {KernelNormalization::exact, KernelNormalization::published}) {
      for (double chi : {0.0, 1.2, 2.5}) {
        const auto c = extract_potential(10, chi, default_phi_grid(10), {norm});
        const std::size_t n = c.values.size();
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(c.values[i] - c.values[n - 1 - i]) < 1e-8);
      }
    }
  }
  SUBCASE("single minimum at zero coupling") {
    const auto c = extract_potential(10, 0.0, default_phi_grid(10));
    const auto lowest = std::min_element(c.values.begin(), c.values.end()) - c.values.begin();
    CHECK(std::abs(c.phi_grid[static_cast<std::size_t>(lowest)]) < 2.0 * pi / 88.0);
    for (std::size_t i = 1; i < c.values.size(); ++i) {
      if (c.phi_grid[i] <= 0.0) CHECK(c.values[i] <= c.values[i - 1] + 1e-12);
      if (c.phi_grid[i - 1] >= 0.0) CHECK(c.values[i] >= c.values[i - 1] - 1e-12);
    }
  }
  SUBCASE("large-N landmark at phi = pi/2") {
    const double v = extract_potential(100, 1.0, {pi / 2}, {KernelNormalization::published}).values[0];
    CHECK(std::abs(v / -25.75 - 1.0) < 0.01);
  }
  SUBCASE("deviation from the closed form shrinks relative to N_p") {
    double previous = 1e9;
    for (int np : {20, 50, 100}) {
      const auto grid = default_phi_grid(np);
      const auto c = extract_potential(np, 1.0, grid, {KernelNormalization::published});
      double worst = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(c.values[i] - potential_large_n(grid[i], np, 1.0)));
      }
      CHECK(worst / np < previous);
      previous = worst / np;
    }
  }
  SUBCASE("barrier exceeds the two lowest levels in the tunneling regime") {
    const auto e = oracle::lmg_spectrum(10, 2.5);
    for (auto norm : {KernelNormalization::exact, KernelNormalization::published}) {
      const double v0 = extract_potential(10, 2.5, {0.0}, {norm}).values[0];
      CHECK(v0 > e(0));
      CHECK(v0 > e(1));
    }
  }
  CHECK(default_phi_grid(10).size() == 88);
  CHECK(default_phi_grid(10).front() == -pi);
  CHECK(default_phi_grid(10).back() == pi);
  CHECK_THROWS_AS(extract_potential(10, 1.0, {4.0}), lmg::InvalidArgument);
}

TEST_CASE("closed-form potential") {
  CHECK(potential_large_n(0.0, 10, 1.7) == doctest::Approx(-4.5));
  CHECK(potential_large_n(pi, 10, 1.0) == doctest::Approx(4.5));
  CHECK(potential_large_n(pi / 2, 10, 2.0) == doctest::Approx(-6.5));
}

TEST_CASE("critical coupling") {
  const double published = critical_chi(10, {KernelNormalization::published});
  CHECK(std::abs(published - 0.85) < 0.05);
  CHECK(curvature_at_zero(10, published - 0.01, KernelNormalization::published) > 0.0);
  CHECK(curvature_at_zero(10, published + 0.01, KernelNormalization::published) < 0.0);
  const double exact = critical_chi(10, {KernelNormalization::exact});
  CHECK(exact > published);
  CHECK(curvature_at_zero(10, exact - 0.01, KernelNormalization::exact) > 0.0);
  CHECK(curvature_at_zero(10, exact + 0.01, KernelNormalization::exact) < 0.0);
  const double large = critical_chi(400, {KernelNormalization::published});
  CHECK(std::abs(large - 399.0 / 403.0) < 0.01);
}
