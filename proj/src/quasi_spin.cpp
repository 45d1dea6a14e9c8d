#include "lmg/quasi_spin.hpp"

#include <cmath>
#include <sstream>

#include "lmg/error.hpp"
#include "parallel.hpp"

namespace lmg {

QuasiSpinBasis::QuasiSpinBasis(int n_particles) : n_particles_(n_particles) {
  if (n_particles < 2 || n_particles % 2 != 0) {
    std::ostringstream msg;
    msg << "number of particles must be a positive even integer, got " << n_particles;
    throw InvalidArgument(msg.str());
  }
}

std::vector<int> QuasiSpinBasis::m_labels() const {
  std::vector<int> labels(static_cast<std::size_t>(dimension()));
  for (int i = 0; i < dimension(); ++i) labels[static_cast<std::size_t>(i)] = m_label(i);
  return labels;
}

double raising_element(int j, int m) {
  const double jj = j;
  const double mm = m;
  return std::sqrt(jj * (jj + 1.0) - mm * (mm + 1.0));
}

double raising_squared_element(int j, int m) {
  return raising_element(j, m) * raising_element(j, m + 1);
}

LmgHamiltonian build_hamiltonian(const QuasiSpinBasis& basis, double chi) {
  const int n = basis.dimension();
  const int j = basis.j();
  const double coupling = chi / (2.0 * basis.n_particles());

  Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) matrix(i, i) = basis.m_label(i);
  // J_+^2 fills the second subdiagonal, J_-^2 (its transpose) the second superdiagonal.
  for (int i = 0; i + 2 < n; ++i) {
    const double v = coupling * raising_squared_element(j, basis.m_label(i));
    matrix(i + 2, i) = v;
    matrix(i, i + 2) = v;
  }
  return {basis, chi, std::move(matrix)};
}

SpectrumResult solve_spectrum(const LmgHamiltonian& h) {
  const Eigen::MatrixXd& a = h.matrix;
  if (a.rows() != a.cols() || a.rows() != h.basis.dimension()) {
    throw NumericalError("hamiltonian matrix does not match its basis dimension");
  }
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * (1.0 + a.cwiseAbs().maxCoeff())) {
    std::ostringstream msg;
    msg << "hamiltonian is not symmetric (max |H - H^T| = " << asym << ")";
    throw NumericalError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  Eigen::MatrixXd vectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    Eigen::Index lead = 0;
    vectors.col(k).cwiseAbs().maxCoeff(&lead);
    if (vectors(lead, k) < 0.0) vectors.col(k) *= -1.0;
  }
  return {solver.eigenvalues(), std::move(vectors)};
}

double energy_gap(const QuasiSpinBasis& basis, double chi) {
  const Eigen::MatrixXd matrix = build_hamiltonian(basis, chi).matrix;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  const Eigen::VectorXd& e = solver.eigenvalues();
  return std::max(0.0, e(1) - e(0));
}

GapCurve gap_curve(const QuasiSpinBasis& basis, std::span<const double> chi_grid, int workers) {
  for (std::size_t i = 1; i < chi_grid.size(); ++i) {
    if (!(chi_grid[i] > chi_grid[i - 1])) throw InvalidArgument("chi grid must be strictly ascending");
  }
  GapCurve curve;
  curve.chi_grid.assign(chi_grid.begin(), chi_grid.end());
  curve.gap_values.resize(chi_grid.size());
  detail::parallel_for(chi_grid.size(), workers, [&](std::size_t i) {
    curve.gap_values[i] = energy_gap(basis, chi_grid[i]);
  });
  return curve;
}

namespace {

double uniform_step(const std::vector<double>& grid) {
  const double h = grid[1] - grid[0];
  if (!(h > 0.0)) throw InvalidArgument("grid must be strictly ascending");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs((grid[i] - grid[i - 1]) - h) > 1e-6 * h) {
      throw InvalidArgument("grid must be uniform for finite differences");
    }
  }
  return h;
}

}  // namespace

std::vector<double> gap_derivatives(const GapCurve& curve, int order) {
  if (order < 1 || order > 3) throw InvalidArgument("derivative order must be 1, 2 or 3");
  const auto& f = curve.gap_values;
  const std::size_t n = f.size();
  if (curve.chi_grid.size() != n) throw InvalidArgument("gap curve arrays differ in length");
  if (n < static_cast<std::size_t>(2 * order + 1)) {
    throw InvalidArgument("grid too coarse for the requested derivative order");
  }
  const double h = uniform_step(curve.chi_grid);
  std::vector<double> d(n);

  switch (order) {
    case 1:
      d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
      for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
      d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
      break;
    case 2: {
      const double h2 = h * h;
      d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
      for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
      d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
      break;
    }
    case 3: {
      const double h3 = 2.0 * h * h * h;
      auto forward = [&](std::size_t i) {
        return (-5.0 * f[i] + 18.0 * f[i + 1] - 24.0 * f[i + 2] + 14.0 * f[i + 3] - 3.0 * f[i + 4]) / h3;
      };
      auto backward = [&](std::size_t i) {
        return (5.0 * f[i] - 18.0 * f[i - 1] + 24.0 * f[i - 2] - 14.0 * f[i - 3] + 3.0 * f[i - 4]) / h3;
      };
      d[0] = forward(0);
      d[1] = forward(1);
      for (std::size_t i = 2; i + 2 < n; ++i) {
        d[i] = (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]) / h3;
      }
      d[n - 2] = backward(n - 2);
      d[n - 1] = backward(n - 1);
      break;
    }
  }
  return d;
}

RegionBoundaries detect_region_boundaries(const GapCurve& curve) {
  if (curve.gap_values.size() < 7) throw InvalidArgument("grid too coarse to locate region boundaries");
  const std::vector<double> d2 = gap_derivatives(curve, 2);
  const std::vector<double> d3 = gap_derivatives(curve, 3);
  const auto& x = curve.chi_grid;
  const std::size_t n = x.size();

  auto crossing = [&](const std::vector<double>& d, std::size_t i) {
    return x[i] + (x[i + 1] - x[i]) * d[i] / (d[i] - d[i + 1]);
  };

  // Edge points use one-sided stencils; only interior crossings count.
  std::size_t first = n;
  for (std::size_t i = 1; i + 2 < n; ++i) {
    if (d2[i] < 0.0 && d2[i + 1] >= 0.0) {
      first = i;
      break;
    }
  }
  if (first == n) {
    throw InvalidArgument("features outside grid: no minimum of the first derivative found");
  }
  std::size_t second = n;
  for (std::size_t i = first + 1; i + 2 < n; ++i) {
    if (d3[i] > 0.0 && d3[i + 1] <= 0.0 && d2[i] > 0.0) {
      second = i;
      break;
    }
  }
  if (second == n) {
    throw InvalidArgument("features outside grid: only one region boundary found");
  }
  return {crossing(d2, first), crossing(d3, second)};
}

ParityBlocks check_parity_blocks(const LmgHamiltonian& h) {
  const int n = h.basis.dimension();
  std::vector<int> even;
  std::vector<int> odd;
  for (int i = 0; i < n; ++i) {
    (h.basis.m_label(i) % 2 == 0 ? even : odd).push_back(i);
  }
  for (int a : even) {
    for (int b : odd) {
      if (h.matrix(a, b) != 0.0 || h.matrix(b, a) != 0.0) {
        std::ostringstream msg;
        msg << "nonzero entry couples m = " << h.basis.m_label(a) << " and m = " << h.basis.m_label(b);
        throw NumericalError(msg.str());
      }
    }
  }
  auto extract = [&](const std::vector<int>& idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd block(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        block(r, c) = h.matrix(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
      }
    }
    return block;
  };
  return {extract(even), extract(odd)};
}

double check_spectral_reflection(const SpectrumResult& spectrum, double tolerance) {
  const Eigen::VectorXd& e = spectrum.eigenvalues;
  const Eigen::Index n = e.size();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) worst = std::max(worst, std::abs(e(k) + e(n - 1 - k)));
  if (n % 2 == 1 && std::abs(e(n / 2)) > tolerance) {
    std::ostringstream msg;
    msg << "middle eigenvalue " << e(n / 2) << " of an odd-dimensional spectrum is not zero";
    throw NumericalError(msg.str());
  }
  return worst;
}

std::vector<double> uniform_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw InvalidArgument("grid requires step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
  return grid;
}

}  // namespace lmg
