#include "lmg/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lmg/error.hpp"

namespace lmg::phase {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

int half_range(Eigen::Index n) {
  if (n < 1 || n % 2 == 0) throw InvalidArgument("phase space dimension must be odd");
  return static_cast<int>((n - 1) / 2);
}

// E(m, j) = exp(2 pi i m j / N) over symmetric labels.
Eigen::MatrixXcd fourier_kernel(int n, double sign) {
  const int half = half_range(n);
  Eigen::MatrixXcd e(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      e(a, b) = std::polar(1.0, sign * 2.0 * pi * (a - half) * (b - half) / n);
    }
  }
  return e;
}

// exp(-i pi j l / N), the half-shift phase of f(j, l).
Eigen::MatrixXcd half_shift_phase(int n) {
  const int half = half_range(n);
  Eigen::MatrixXcd ph(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) ph(a, b) = std::polar(1.0, -pi * (a - half) * (b - half) / n);
  }
  return ph;
}

int wrap_index(int index, int n) { return ((index % n) + n) % n; }

void require_square(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("operator must be square");
  half_range(a.rows());
}

WignerFunction real_part_checked(const Eigen::MatrixXcd& w, double tolerance) {
  const double residue = w.imag().cwiseAbs().maxCoeff();
  if (residue > tolerance) {
    std::ostringstream msg;
    msg << "Wigner function has imaginary residue " << residue;
    throw NumericalError(msg.str());
  }
  return {w.real()};
}

}  // namespace

Eigen::MatrixXcd wigner_transform(const Eigen::MatrixXcd& op) {
  require_square(op);
  const int n = static_cast<int>(op.rows());
  const int half = half_range(n);
  // diagonals(p, l) = A(p, [p + l])
  Eigen::MatrixXcd diagonals(n, n);
  for (int p = 0; p < n; ++p) {
    for (int l = 0; l < n; ++l) diagonals(p, l) = op(p, wrap_index(p + l - half, n));
  }
  const Eigen::MatrixXcd forward = fourier_kernel(n, -1.0);
  const Eigen::MatrixXcd f = (forward * diagonals).cwiseProduct(half_shift_phase(n));
  const Eigen::MatrixXcd backward = fourier_kernel(n, 1.0);
  return backward * f * backward.transpose() / static_cast<double>(n * n);
}

Eigen::MatrixXcd inverse_wigner_transform(const Eigen::MatrixXcd& w) {
  require_square(w);
  const int n = static_cast<int>(w.rows());
  const int half = half_range(n);
  const Eigen::MatrixXcd backward = fourier_kernel(n, 1.0);
  const Eigen::MatrixXcd f = backward.adjoint() * w * backward.conjugate();
  const Eigen::MatrixXcd shifted = f.cwiseQuotient(half_shift_phase(n));
  const Eigen::MatrixXcd diagonals = fourier_kernel(n, -1.0).adjoint() * shifted / static_cast<double>(n);
  Eigen::MatrixXcd op(n, n);
  for (int p = 0; p < n; ++p) {
    for (int l = 0; l < n; ++l) op(p, wrap_index(p + l - half, n)) = diagonals(p, l);
  }
  return op;
}

WignerFunction wigner_from_pure(const StateCoefficients& state) {
  const Eigen::VectorXcd& c = state.coeffs;
  half_range(c.size());
  if (std::abs(c.squaredNorm() - 1.0) > 1e-12) throw InvalidArgument("state is not normalized");
  return real_part_checked(wigner_transform(c * c.adjoint()), 1e-12);
}

WignerFunction wigner_from_density(const Eigen::MatrixXcd& rho) {
  require_square(rho);
  constexpr double tol = 1e-10;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0, 0.0)) > tol) throw InvalidArgument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success || solver.eigenvalues().minCoeff() < -tol) {
    throw InvalidArgument("density matrix is not positive semidefinite");
  }
  return real_part_checked(wigner_transform(rho), 1e-12);
}

Eigen::MatrixXcd inverse_wigner(const WignerFunction& w) {
  return inverse_wigner_transform(w.values.cast<cplx>());
}

Eigen::MatrixXd mapped_hamiltonian(int n_particles, double chi) {
  const QuasiSpinBasis basis(n_particles);
  const int n = basis.dimension();
  const double j = basis.j();
  Eigen::MatrixXd h(n, n);
  for (int a = 0; a < n; ++a) {
    const double m = basis.m_label(a);
    const double amplitude = chi / n_particles * std::sqrt((j + m) * (j + m + 1.0) * (j - m) * (j - m + 1.0));
    for (int b = 0; b < n; ++b) {
      h(a, b) = m + amplitude * std::cos(2.0 * pi / n * 2.0 * basis.m_label(b));
    }
  }
  return h;
}

Eigen::MatrixXd weyl_symbol(const Eigen::MatrixXd& op) {
  const Eigen::MatrixXcd w = wigner_transform(op.cast<cplx>()) * static_cast<double>(op.rows());
  return real_part_checked(w, 1e-10 * (1.0 + op.cwiseAbs().maxCoeff())).values;
}

LiouvillianTensor::LiouvillianTensor(int dimension, Eigen::MatrixXcd matrix)
    : dimension_(dimension), matrix_(std::move(matrix)) {
  const Eigen::Index size = static_cast<Eigen::Index>(dimension) * dimension;
  if (matrix_.rows() != size || matrix_.cols() != size) {
    throw InvalidArgument("Liouvillian matrix must be N^2 x N^2");
  }
  // -i L with L = i X gives X.
  const double residue = matrix_.real().cwiseAbs().maxCoeff();
  if (residue > 1e-10 * (1.0 + matrix_.cwiseAbs().maxCoeff())) {
    throw NumericalError("Liouvillian is not purely imaginary");
  }
  generator_ = matrix_.imag();
}

Eigen::MatrixXcd LiouvillianTensor::apply(const Eigen::MatrixXd& w) const {
  if (w.rows() != dimension_ || w.cols() != dimension_) throw InvalidArgument("Wigner array dimension mismatch");
  const Eigen::MatrixXd row_major = w.transpose();
  const Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(row_major.data(), row_major.size());
  const Eigen::VectorXcd image = matrix_ * flat.cast<cplx>();
  Eigen::MatrixXcd out(dimension_, dimension_);
  for (int u = 0; u < dimension_; ++u) {
    for (int v = 0; v < dimension_; ++v) out(u, v) = image(u * dimension_ + v);
  }
  return out;
}

LiouvillianTensor build_liouvillian(int n_particles, double chi) {
  const LmgHamiltonian h = build_hamiltonian(QuasiSpinBasis(n_particles), chi);
  const Eigen::MatrixXcd hc = h.matrix.cast<cplx>();
  const int n = h.basis.dimension();
  Eigen::MatrixXcd matrix(n * n, n * n);
  Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      unit(r, s) = 1.0;
      const Eigen::MatrixXcd op = inverse_wigner_transform(unit);
      const Eigen::MatrixXcd image = wigner_transform(hc * op - op * hc);
      unit(r, s) = 0.0;
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) matrix(u * n + v, r * n + s) = image(u, v);
      }
    }
  }
  return {n, std::move(matrix)};
}

Marginals marginals(const WignerFunction& w) {
  const Eigen::VectorXd rows = w.values.rowwise().sum();
  const Eigen::VectorXd cols = w.values.colwise().sum().transpose();
  return {{rows.data(), rows.data() + rows.size()}, {cols.data(), cols.data() + cols.size()}};
}

double overlap_probability(const WignerFunction& initial, const WignerFunction& final_state) {
  if (initial.values.rows() != final_state.values.rows() || initial.values.cols() != final_state.values.cols()) {
    throw InvalidArgument("Wigner functions differ in dimension");
  }
  const double p = initial.dimension() * initial.values.cwiseProduct(final_state.values).sum();
  if (p < -1e-8 || p > 1.0 + 1e-8) {
    std::ostringstream msg;
    msg << "overlap probability " << p << " outside [0, 1]";
    throw NumericalError(msg.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

double mean_phase(const WignerFunction& w, MeanPhaseMode mode) {
  const int n = w.dimension();
  const int half = half_range(n);
  const Eigen::VectorXd phi = w.values.colwise().sum().transpose();
  if (mode == MeanPhaseMode::linear) {
    double mean = 0.0;
    for (int b = 0; b < n; ++b) mean += 2.0 * pi * (b - half) / n * phi(b);
    return std::clamp(mean, -pi, pi);
  }
  cplx resultant = 0.0;
  for (int b = 0; b < n; ++b) resultant += std::polar(phi(b), 2.0 * pi * (b - half) / n);
  if (std::abs(resultant) < 1e-14) return 0.0;
  return std::arg(resultant);
}

EvolutionTrace propagate_series(const WignerFunction& initial, const LiouvillianTensor& liouvillian, double t_final,
                                const PropagationOptions& options) {
  const int n = initial.dimension();
  if (n != liouvillian.dimension()) throw InvalidArgument("Wigner function and Liouvillian differ in dimension");
  if (!(options.dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(options.tolerance > 0.0)) throw InvalidArgument("series tolerance must be positive");
  if (!(t_final >= 0.0)) throw InvalidArgument("final time must be non-negative");
  const double ratio = t_final / options.dt;
  const auto steps = static_cast<long>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("final time must be a multiple of the time step");
  }

  const Eigen::MatrixXd& generator = liouvillian.generator();
  // Column-major storage of the transpose is the row-major flattening.
  Eigen::MatrixXd state_t = initial.values.transpose();
  Eigen::VectorXd state = Eigen::Map<Eigen::VectorXd>(state_t.data(), state_t.size());
  Eigen::VectorXd term(state.size());

  EvolutionTrace trace;
  WignerFunction current = initial;
  auto record = [&](double t) {
    trace.times.push_back(t);
    trace.probability.push_back(overlap_probability(initial, current));
    trace.mean_phase.push_back(mean_phase(current, options.mean_phase));
    if (options.record_marginals) {
      Marginals mg = marginals(current);
      trace.angular_momentum_marginals.push_back(std::move(mg.angular_momentum));
      trace.angle_marginals.push_back(std::move(mg.angle));
    }
  };
  record(0.0);

  for (long step = 1; step <= steps; ++step) {
    term = state;
    Eigen::VectorXd next = state;
    int k = 1;
    for (;; ++k) {
      if (k > options.max_terms) {
        std::ostringstream msg;
        msg << "exponential series did not converge within " << options.max_terms
            << " terms; reduce the time step (dt = " << options.dt << ")";
        throw NumericalError(msg.str());
      }
      term = (options.dt / k) * (generator * term);
      next += term;
      if (term.cwiseAbs().maxCoeff() < options.tolerance) break;
    }
    state = std::move(next);
    current.values = Eigen::Map<const Eigen::MatrixXd>(state.data(), n, n).transpose();
    record(static_cast<double>(step) * options.dt);
  }
  trace.final_state = std::move(current);
  return trace;
}

StateCoefficients propagate_exact(const StateCoefficients& state, const SpectrumResult& spectrum, double t) {
  const Eigen::Index n = spectrum.eigenvalues.size();
  if (state.coeffs.size() != n || spectrum.eigenvectors.rows() != n) {
    throw InvalidArgument("state and spectrum differ in dimension");
  }
  const Eigen::MatrixXcd vectors = spectrum.eigenvectors.cast<cplx>();
  Eigen::VectorXcd amplitudes = vectors.adjoint() * state.coeffs;
  for (Eigen::Index k = 0; k < n; ++k) amplitudes(k) *= std::polar(1.0, -spectrum.eigenvalues(k) * t);
  return {vectors * amplitudes};
}

StateCoefficients make_combination(const SpectrumResult& spectrum, int i, int j, CombinationSign sign) {
  const auto levels = static_cast<int>(spectrum.eigenvalues.size());
  if (i < 0 || j < 0 || i >= levels || j >= levels) throw InvalidArgument("level index out of range");
  if (i == j) throw InvalidArgument("combination needs two distinct levels");
  const double s = sign == CombinationSign::symmetric ? 1.0 : -1.0;
  const Eigen::VectorXd v = (spectrum.eigenvectors.col(i) + s * spectrum.eigenvectors.col(j)) / std::sqrt(2.0);
  return {v.cast<cplx>()};
}

double dominant_angular_frequency(const std::vector<double>& times, const std::vector<double>& signal) {
  const std::size_t count = signal.size();
  if (count < 8 || times.size() != count) throw InvalidArgument("signal too short for a frequency estimate");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw InvalidArgument("sample times must be ascending");

  double mean = 0.0;
  for (double x : signal) mean += x;
  mean /= static_cast<double>(count);
  std::vector<double> windowed(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(count - 1));
    windowed[i] = (signal[i] - mean) * hann;
  }

  constexpr std::size_t padding = 16;
  const std::size_t length = padding * count;
  auto magnitude = [&](std::size_t bin) {
    const cplx step = std::polar(1.0, -2.0 * pi * static_cast<double>(bin) / static_cast<double>(length));
    cplx phase = 1.0;
    cplx acc = 0.0;
    for (double x : windowed) {
      acc += x * phase;
      phase *= step;
    }
    return std::abs(acc);
  };

  std::vector<double> spectrum(length / 2 + 1);
  for (std::size_t bin = 0; bin < spectrum.size(); ++bin) spectrum[bin] = magnitude(bin);
  std::size_t peak = 1;
  for (std::size_t bin = 1; bin + 1 < spectrum.size(); ++bin) {
    if (spectrum[bin] > spectrum[peak]) peak = bin;
  }
  double offset = 0.0;
  if (peak + 1 < spectrum.size() && spectrum[peak - 1] > 0.0 && spectrum[peak + 1] > 0.0) {
    const double a = std::log(spectrum[peak - 1]);
    const double b = std::log(spectrum[peak]);
    const double c = std::log(spectrum[peak + 1]);
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) offset = 0.5 * (a - c) / denom;
  }
  return 2.0 * pi * (static_cast<double>(peak) + offset) / (static_cast<double>(length) * dt);
}

double extract_frequency(const EvolutionTrace& trace) {
  const double signal_frequency = dominant_angular_frequency(trace.times, trace.probability);
  const double span = trace.times.back() - trace.times.front();
  if (span * signal_frequency / (2.0 * pi) < 2.0) {
    throw InvalidArgument("trace holds fewer than two periods of the probability signal");
  }
  return 0.5 * signal_frequency;
}

}  // namespace lmg::phase
