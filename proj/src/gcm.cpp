#include "lmg/gcm.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lmg/error.hpp"

namespace lmg::gcm {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

double int_pow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double interaction_prefactor(int n_particles, double chi, KernelNormalization normalization) {
  const double g = normalization == KernelNormalization::exact ? n_particles - 1.0 : n_particles;
  return chi * g / 4.0;
}

int resolve_points(int n_particles, const KernelOptions& options) {
  const int points = options.points > 0 ? options.points : 4 * (n_particles + 2);
  if (points < n_particles + 3) {
    std::ostringstream msg;
    msg << "quadrature with " << points << " points is below the exactness threshold "
        << n_particles + 3 << " for N_p = " << n_particles;
    throw InvalidArgument(msg.str());
  }
  return points;
}

std::vector<double> periodic_grid(int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int a = 0; a < points; ++a) g[static_cast<std::size_t>(a)] = -pi + 2.0 * pi * a / points;
  return g;
}

// Full double trapezoid. The integral depends on (m, m') only through
// r = m' - m and s = m + m', so it is tabulated over (r, s).
Eigen::MatrixXcd kernel_table_trapezoid(int n_particles, double chi, KernelNormalization normalization,
                                        int points) {
  const std::vector<double> g = periodic_grid(points);
  const double w = 2.0 * pi / points;
  const int span = 2 * n_particles + 1;

  // theta sum first: partial(a, s) = sum_b exp(-i theta_b s/2) H(phi_a, theta_b) w
  Eigen::MatrixXcd partial = Eigen::MatrixXcd::Zero(points, span);
  std::vector<double> row(static_cast<std::size_t>(points));
  for (int a = 0; a < points; ++a) {
    for (int b = 0; b < points; ++b) {
      row[static_cast<std::size_t>(b)] = energy_kernel(g[static_cast<std::size_t>(a)],
                                                       g[static_cast<std::size_t>(b)], n_particles,
                                                       chi, normalization);
    }
    for (int si = 0; si < span; ++si) {
      const double s = si - n_particles;
      cplx acc = 0.0;
      for (int b = 0; b < points; ++b) {
        acc += std::polar(row[static_cast<std::size_t>(b)], -0.5 * s * g[static_cast<std::size_t>(b)]);
      }
      partial(a, si) = acc * w;
    }
  }
  Eigen::MatrixXcd table = Eigen::MatrixXcd::Zero(span, span);
  for (int ri = 0; ri < span; ++ri) {
    const double r = ri - n_particles;
    for (int si = 0; si < span; ++si) {
      cplx acc = 0.0;
      for (int a = 0; a < points; ++a) acc += std::polar(1.0, r * g[static_cast<std::size_t>(a)]) * partial(a, si);
      table(ri, si) = acc * w;
    }
  }
  return table;
}

ProjectedKernel project_trapezoid(int n_particles, double chi, KernelNormalization normalization,
                                  int points) {
  const QuasiSpinBasis basis(n_particles);
  const OverlapEigenvalues lambda = overlap_eigenvalues(n_particles);
  const Eigen::MatrixXcd table = kernel_table_trapezoid(n_particles, chi, normalization, points);
  const int n = basis.dimension();
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const int m = basis.m_label(i);
      const int mp = basis.m_label(k);
      h(i, k) = table(mp - m + n_particles, mp + m + n_particles) /
                (2.0 * pi * std::sqrt(lambda(m) * lambda(mp)));
    }
  }
  return {basis, chi, std::move(h)};
}

// The kernel is a sum of three separable terms p_t(phi) cos^{n_t}(theta/2).
// Each p_t is a short trigonometric polynomial whose Fourier coefficients are
// known exactly; the theta transforms come from
//   \int cos^n(theta/2) exp(-i s theta/2) dtheta = 2 pi 2^-n C(n, (n - s)/2)
// for n - s even. Combined with lambda_m = 2 pi 2^-Np C(N_p, J + m) the
// result stays O(1) in log space. The theta factor reaches ~2^Np for
// |m - m'| ~ N_p, so the phi coefficients must be exact zeros there; a
// quadrature would leave rounding noise that this factor amplifies.
ProjectedKernel project_analytic_theta(int n_particles, double chi, KernelNormalization normalization) {
  const QuasiSpinBasis basis(n_particles);
  const int np = n_particles;
  const int j = basis.j();
  const double v = interaction_prefactor(np, chi, normalization);

  struct Term {
    double coefficient;
    int cos_power;
    // (1/2 pi) \int p(phi) exp(i r phi) dphi for r = -2 ... 2
    std::array<double, 5> fourier;
  };
  const std::array<Term, 3> terms{{
      {-0.5 * np, np - 1, {0.0, 0.5, 0.0, 0.5, 0.0}},     // cos phi
      {-v, np - 2, {-0.25, 0.0, 1.5, 0.0, -0.25}},         // 1 + sin^2 phi
      {v, np, {0.0, 0.0, 1.0, 0.0, 0.0}},                  // 1
  }};

  const int n = basis.dimension();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const int m = basis.m_label(i);
      const int mp = basis.m_label(k);
      const int r = mp - m;
      const int s = mp + m;
      const double log_norm = 0.5 * (log_binomial(np, j + m) + log_binomial(np, j + mp));
      double acc = 0.0;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const int power = terms[t].cos_power;
        if (std::abs(r) > 2 || (power - s) % 2 != 0 || std::abs(s) > power) continue;
        const double phi_factor = terms[t].fourier[static_cast<std::size_t>(r + 2)];
        if (phi_factor == 0.0) continue;
        const double theta_factor =
            std::exp(log_binomial(power, (power - s) / 2) + (np - power) * std::numbers::ln2 - log_norm);
        acc += terms[t].coefficient * phi_factor * theta_factor;
      }
      h(i, k) = acc;
    }
  }
  return {basis, chi, std::move(h)};
}

}  // namespace

double coherent_overlap(double alpha_prime, double alpha, int n_particles) {
  const QuasiSpinBasis basis(n_particles);
  return int_pow(std::cos(0.5 * (alpha_prime - alpha)), basis.n_particles());
}

OverlapEigenvalues overlap_eigenvalues(int n_particles) {
  const QuasiSpinBasis basis(n_particles);
  std::vector<double> lambda(static_cast<std::size_t>(basis.dimension()));
  for (int i = 0; i < basis.dimension(); ++i) {
    // 2 pi 2^-Np C(N_p, J + m)
    lambda[static_cast<std::size_t>(i)] =
        2.0 * pi * std::exp(log_binomial(n_particles, i) - n_particles * std::numbers::ln2);
  }
  return {basis, std::move(lambda)};
}

double energy_kernel(double phi, double theta, int n_particles, double chi,
                     KernelNormalization normalization) {
  const QuasiSpinBasis basis(n_particles);
  constexpr double slack = 1e-12;
  if (std::abs(phi) > pi + slack || std::abs(theta) > pi + slack) {
    throw InvalidArgument("energy kernel arguments must lie in [-pi, pi]");
  }
  const int np = basis.n_particles();
  const double c = std::cos(0.5 * theta);
  const double c_low = int_pow(c, np - 2);
  const double sin_phi = std::sin(phi);
  return -0.5 * np * std::cos(phi) * c_low * c -
         interaction_prefactor(np, chi, normalization) * (c_low * (1.0 + sin_phi * sin_phi) - c_low * c * c);
}

ProjectedKernel projected_kernel(int n_particles, double chi, const KernelOptions& options) {
  const QuasiSpinBasis basis(n_particles);
  const int points = resolve_points(n_particles, options);
  Quadrature mode = options.quadrature;
  if (mode == Quadrature::automatic) {
    mode = n_particles <= 20 ? Quadrature::trapezoid : Quadrature::analytic_theta;
  }
  if (mode == Quadrature::trapezoid) {
    return project_trapezoid(n_particles, chi, options.normalization, points);
  }
  return project_analytic_theta(n_particles, chi, options.normalization);
}

AngleKernel angle_kernel(const ProjectedKernel& kernel) {
  const int n = kernel.basis.dimension();
  const int half = (n - 1) / 2;
  AngleKernel out;
  out.theta_grid.resize(static_cast<std::size_t>(n));
  Eigen::MatrixXcd dft(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int row = 0; row < n; ++row) {
    const double theta = 2.0 * pi * (row - half) / n;
    out.theta_grid[static_cast<std::size_t>(row)] = theta;
    for (int col = 0; col < n; ++col) dft(row, col) = std::polar(norm, kernel.basis.m_label(col) * theta);
  }
  out.matrix = dft * kernel.matrix * dft.adjoint();
  return out;
}

std::vector<double> default_phi_grid(int n_particles) {
  const QuasiSpinBasis basis(n_particles);
  const int count = 8 * basis.dimension();
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = -pi + 2.0 * pi * i / (count - 1);
  grid.back() = pi;
  return grid;
}

PotentialCurve extract_potential(int n_particles, double chi, const std::vector<double>& phi_grid,
                                 const KernelOptions& options) {
  for (double phi : phi_grid) {
    if (std::abs(phi) > pi + 1e-12) throw InvalidArgument("potential grid must lie in [-pi, pi]");
  }
  const ProjectedKernel kernel = projected_kernel(n_particles, chi, options);
  const int n = kernel.basis.dimension();
  const int half = (n - 1) / 2;
  const int np = n_particles;

  // D(s) for s = m + m' in [-N_p, N_p]: the discrete u-sum with u = 2 pi k / N.
  std::vector<cplx> u_sum(static_cast<std::size_t>(2 * np + 1));
  for (int s = -np; s <= np; ++s) {
    cplx acc = 0.0;
    for (int k = -half; k <= half; ++k) acc += std::polar(1.0, pi * k * s / n);
    u_sum[static_cast<std::size_t>(s + np)] = acc / static_cast<double>(n);
  }
  // Collapse to Fourier coefficients in phi: c[r + N_p] with r = m - m'.
  std::vector<cplx> coeff(static_cast<std::size_t>(2 * np + 1), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const int m = kernel.basis.m_label(i);
      const int mp = kernel.basis.m_label(k);
      coeff[static_cast<std::size_t>(m - mp + np)] += kernel.matrix(i, k) * u_sum[static_cast<std::size_t>(m + mp + np)];
    }
  }

  PotentialCurve curve;
  curve.phi_grid = phi_grid;
  curve.values.resize(phi_grid.size());
  for (std::size_t p = 0; p < phi_grid.size(); ++p) {
    cplx acc = 0.0;
    for (int r = -np; r <= np; ++r) acc += coeff[static_cast<std::size_t>(r + np)] * std::polar(1.0, r * phi_grid[p]);
    if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real()))) {
      std::ostringstream msg;
      msg << "collective potential has imaginary residue " << acc.imag() << " at phi = " << phi_grid[p];
      throw NumericalError(msg.str());
    }
    curve.values[p] = acc.real();
  }
  return curve;
}

double potential_large_n(double phi, int n_particles, double chi) {
  const double s = std::sin(phi);
  return -0.5 * (n_particles - 1.0) * std::cos(phi) - chi * (n_particles + 3.0) / 4.0 * s * s;
}

double critical_chi(int n_particles, const KernelOptions& options) {
  const QuasiSpinBasis basis(n_particles);
  const double h = pi / (4.0 * basis.dimension());
  const std::vector<double> stencil{-h, 0.0, h};
  auto curvature = [&](double chi) {
    const std::vector<double> v = extract_potential(n_particles, chi, stencil, options).values;
    return (v[0] - 2.0 * v[1] + v[2]) / (h * h);
  };
  double lo = 0.0;
  double hi = 3.0;
  double f_lo = curvature(lo);
  const double f_hi = curvature(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw NumericalError("curvature of the potential at phi = 0 does not change sign for chi in [0, 3]");
  }
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = curvature(mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace lmg::gcm
