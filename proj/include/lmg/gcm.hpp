#ifndef LMG_GCM_HPP
#define LMG_GCM_HPP

// Generator-coordinate treatment of the LMG model over su(2) coherent
// states |alpha>, leading to a collective potential V(phi) in an angle
// variable.
//
// Chain: overlap kernel cos^Np((a' - a)/2)  ->  its Fourier eigenbasis
// u_m(a) = exp(i m a)/sqrt(2 pi) with eigenvalues lambda_m  ->  energy
// kernel projected onto that basis, H(m, m')  ->  discrete angle
// representation H(k, k')  ->  zeroth moment in the angle difference,
// V(phi).

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "lmg/quasi_spin.hpp"

namespace lmg::gcm {

/// Prefactor of the interaction term in the coherent-state energy kernel.
///
/// `exact` uses chi (N_p - 1)/4, the true matrix element between coherent
/// states; its projection reproduces the LMG spectrum to machine precision.
///
/// `published` uses chi N_p / 4. This is the normalization behind the
/// published collective potentials: it yields the curvature change of V at
/// phi = 0 near chi = 0.85 for N_p = 10 and the (N_p + 3)/4 coefficient of
/// the large-N_p form. Its projected spectrum equals the LMG spectrum at
/// the rescaled coupling chi N_p / (N_p - 1).
///
/// Both use the sign of the interaction term that produces a double well
/// for large chi; the LMG spectrum is even in chi.
enum class KernelNormalization { exact, published };

enum class Quadrature {
  /// trapezoid for N_p <= 20, analytic_theta above.
  automatic,
  /// Uniform periodic trapezoid on both axes. Exact for trigonometric
  /// integrands, but the small-lambda normalization amplifies rounding
  /// roughly like 2^N_p, so it is only useful for small N_p.
  trapezoid,
  /// Exact Fourier coefficients in phi and the binomial closed form of the
  /// theta integrals of cos^n(theta/2) exp(-i s theta/2). No grid is used.
  analytic_theta,
};

struct KernelOptions {
  KernelNormalization normalization = KernelNormalization::exact;
  Quadrature quadrature = Quadrature::automatic;
  /// Trapezoid points per axis; 0 selects 4 (N_p + 2).
  int points = 0;
};

/// <alpha'|alpha> = cos^Np((alpha' - alpha)/2).
double coherent_overlap(double alpha_prime, double alpha, int n_particles);

struct OverlapEigenvalues {
  QuasiSpinBasis basis;
  /// lambda[m + J]
  std::vector<double> lambda;

  double operator()(int m) const { return lambda[static_cast<std::size_t>(basis.index_of(m))]; }
};

/// lambda_m = 2 pi N_p! / (2^N_p (N_p/2 + m)! (N_p/2 - m)!).
OverlapEigenvalues overlap_eigenvalues(int n_particles);

/// Energy kernel <alpha'|H_L|alpha> in the half-sum / difference variables
/// phi = (alpha' + alpha)/2, theta = alpha' - alpha, written with the
/// cos(theta/2) powers multiplied out so it stays finite at theta = +-pi:
///
///   -(N_p/2) cos(phi) c^(N_p-1) - (chi g/4) [c^(N_p-2) (1 + sin^2 phi) - c^N_p]
///
/// with c = cos(theta/2) and g = N_p - 1 (exact) or N_p (published).
/// Throws InvalidArgument if phi or theta lies outside [-pi, pi].
double energy_kernel(double phi, double theta, int n_particles, double chi,
                     KernelNormalization normalization = KernelNormalization::exact);

struct ProjectedKernel {
  QuasiSpinBasis basis;
  double chi;
  /// H(m, m') at (m + J, m' + J).
  Eigen::MatrixXcd matrix;
};

/// H(m, m') = 1/(2 pi sqrt(lambda_m lambda_m')) \int\int exp(i phi (m' - m))
///            exp(-i theta (m' + m)/2) H(phi, theta) dphi dtheta.
/// Throws InvalidArgument when `points` is below N_p + 3, the smallest grid
/// on which the trapezoid rule is exact for this integrand.
ProjectedKernel projected_kernel(int n_particles, double chi, const KernelOptions& options = {});

struct AngleKernel {
  /// theta_k = 2 pi k / N for k = -(N-1)/2 ... (N-1)/2.
  std::vector<double> theta_grid;
  Eigen::MatrixXcd matrix;
};

/// H(k, k') = (1/N) sum_{m, m'} exp(i m theta_k) H(m, m') exp(-i m' theta_k').
AngleKernel angle_kernel(const ProjectedKernel& kernel);

struct PotentialCurve {
  std::vector<double> phi_grid;
  std::vector<double> values;
};

/// 8 N uniformly spaced points on [-pi, pi], endpoints included.
std::vector<double> default_phi_grid(int n_particles);

/// Zeroth moment of the discrete angle kernel with respect to the angle
/// difference u = theta_k - theta_k', as a function of the half sum phi:
///
///   V(phi) = sum_{m, m'} exp(i phi (m - m')) H(m, m') D(m + m'),
///   D(s)   = (1/N) sum_k exp(i (2 pi k / N) s / 2).
///
/// Throws InvalidArgument for phi outside [-pi, pi] and NumericalError if
/// the imaginary residue exceeds 1e-10 (relative to max(1, |V|)).
PotentialCurve extract_potential(int n_particles, double chi, const std::vector<double>& phi_grid,
                                 const KernelOptions& options = {});

/// -(N_p - 1)/2 cos(phi) - chi (N_p + 3)/4 sin^2(phi).
double potential_large_n(double phi, int n_particles, double chi);

/// Coupling at which the second difference of V at phi = 0 (step
/// pi / (4 N)) changes sign, found by bisection on [0, 3] to 1e-4.
/// Throws NumericalError if there is no sign change in that interval.
double critical_chi(int n_particles, const KernelOptions& options = {});

}  // namespace lmg::gcm

#endif  // LMG_GCM_HPP
