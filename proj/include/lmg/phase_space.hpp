#ifndef LMG_PHASE_SPACE_HPP
#define LMG_PHASE_SPACE_HPP

// Discrete Wigner functions on the N x N phase space of the J = N_p/2
// multiplet. Points are labelled by an angular momentum m and a discrete
// angle n (theta_n = 2 pi n / N), both on the symmetric range
// -N_p/2 ... N_p/2. Arrays store (m, n) at (m + J, n + J).
//
// The map from operators to phase-space functions is
//
//   W[A](m, n) = 1/N^2 sum_{j,l} exp(2 pi i (m j + n l)/N) f(j, l)
//   f(j, l)    = sum_p A(p, [p + l]) exp(-2 pi i j (p + l/2)/N)
//
// where [p + l] wraps cyclically into the label range. For a pure state
// A(p, q) = c_p c*_q. With symmetric label ranges a Hermitian A maps to a
// real array, and the map is a bijection on N x N matrices.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lmg/quasi_spin.hpp"

namespace lmg::phase {

/// Amplitudes c_m on the J_z basis, index m + J.
struct StateCoefficients {
  Eigen::VectorXcd coeffs;
};

struct WignerFunction {
  Eigen::MatrixXd values;

  int dimension() const { return static_cast<int>(values.rows()); }
};

/// Raw linear map on arbitrary complex matrices (no validation).
Eigen::MatrixXcd wigner_transform(const Eigen::MatrixXcd& op);

/// Inverse of wigner_transform.
Eigen::MatrixXcd inverse_wigner_transform(const Eigen::MatrixXcd& w);

/// Throws InvalidArgument if |sum |c|^2 - 1| > 1e-12 or the dimension is
/// even.
WignerFunction wigner_from_pure(const StateCoefficients& state);

/// Throws InvalidArgument unless rho is Hermitian, of unit trace and
/// positive semidefinite (all within 1e-10).
WignerFunction wigner_from_density(const Eigen::MatrixXcd& rho);

Eigen::MatrixXcd inverse_wigner(const WignerFunction& w);

/// Closed-form phase-space Hamiltonian
///   h(m, n) = m + (chi/N_p) sqrt((J+m)(J+m+1)(J-m)(J-m+1)) cos(4 pi n / N).
Eigen::MatrixXd mapped_hamiltonian(int n_particles, double chi);

/// N W[op], the Weyl symbol normalized so that W[J_z] maps to m.
/// Throws NumericalError if the result is not real.
Eigen::MatrixXd weyl_symbol(const Eigen::MatrixXd& op);

/// Phase-space representation of the commutator superoperator [H_L, .],
/// stored as an N^2 x N^2 matrix acting on row-major flattened arrays
/// (index m * N + n). It evolves Wigner functions by
///   i d/dt rho_w(u, v) = sum_{r,s} L(u, v, r, s) rho_w(r, s).
class LiouvillianTensor {
 public:
  LiouvillianTensor(int dimension, Eigen::MatrixXcd matrix);

  int dimension() const { return dimension_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  /// Element by array indices (0 ... N-1).
  std::complex<double> operator()(int u, int v, int r, int s) const {
    return matrix_(u * dimension_ + v, r * dimension_ + s);
  }

  /// sum_{r,s} L(u, v, r, s) w(r, s)
  Eigen::MatrixXcd apply(const Eigen::MatrixXd& w) const;

  /// Real matrix of -i L, the generator of d/dt rho_w. L is purely
  /// imaginary because [H, rho] is anti-Hermitian for Hermitian rho.
  const Eigen::MatrixXd& generator() const { return generator_; }

 private:
  int dimension_;
  Eigen::MatrixXcd matrix_;
  Eigen::MatrixXd generator_;
};

/// Built as W o [H_L, .] o W^{-1}, column by column.
LiouvillianTensor build_liouvillian(int n_particles, double chi);

enum class MeanPhaseMode { linear, circular };

struct PropagationOptions {
  double dt = 0.1;
  double tolerance = 1e-12;
  int max_terms = 50;
  MeanPhaseMode mean_phase = MeanPhaseMode::linear;
  bool record_marginals = false;
};

struct EvolutionTrace {
  std::vector<double> times;
  /// Overlap probability with the initial Wigner function.
  std::vector<double> probability;
  std::vector<double> mean_phase;
  /// Filled when PropagationOptions::record_marginals is set.
  std::vector<std::vector<double>> angular_momentum_marginals;
  std::vector<std::vector<double>> angle_marginals;
  WignerFunction final_state;
};

/// Steps rho_w forward by dt repeatedly, each step summing
/// sum_K (-i dt)^K L^K / K! rho_w until the added term's max-norm falls
/// below the tolerance. Records t = 0 and every step. t_final must be a
/// non-negative multiple of dt. Throws NumericalError when a step needs
/// more than max_terms terms.
EvolutionTrace propagate_series(const WignerFunction& initial, const LiouvillianTensor& liouvillian,
                                double t_final, const PropagationOptions& options = {});

/// exp(-i H t) applied through the eigenbasis.
StateCoefficients propagate_exact(const StateCoefficients& state, const SpectrumResult& spectrum, double t);

struct Marginals {
  std::vector<double> angular_momentum;  ///< L(m), summed over n
  std::vector<double> angle;             ///< Phi(n), summed over m
};

Marginals marginals(const WignerFunction& w);

/// N sum_{m,n} w_i w_f, which equals |<psi_i|psi_f>|^2 for pure states.
/// Throws NumericalError if the value leaves [-1e-8, 1 + 1e-8]; otherwise
/// the result is clamped to [0, 1].
double overlap_probability(const WignerFunction& initial, const WignerFunction& final_state);

/// Average angle of Phi(n): the signed linear mean sum_n theta_n Phi(n),
/// or the argument of sum_n Phi(n) exp(i theta_n).
double mean_phase(const WignerFunction& w, MeanPhaseMode mode = MeanPhaseMode::linear);

enum class CombinationSign { symmetric, antisymmetric };

/// (v_i +- v_j)/sqrt(2) from two eigenvectors of the spectrum.
StateCoefficients make_combination(const SpectrumResult& spectrum, int i, int j, CombinationSign sign);

/// Dominant angular frequency of a uniformly sampled signal (mean removed,
/// Hann window, 16x zero padding, parabolic interpolation of the log
/// magnitude around the DFT peak).
double dominant_angular_frequency(const std::vector<double>& times, const std::vector<double>& signal);

/// omega = Delta/2, where Delta is the oscillation frequency of P(t).
/// Throws InvalidArgument when the trace holds fewer than two periods.
double extract_frequency(const EvolutionTrace& trace);

}  // namespace lmg::phase

#endif  // LMG_PHASE_SPACE_HPP
