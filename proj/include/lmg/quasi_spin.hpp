#ifndef LMG_QUASI_SPIN_HPP
#define LMG_QUASI_SPIN_HPP

// Lipkin-Meshkov-Glick model in the quasi-spin representation:
//
//   H_L = J_z + chi / (2 N_p) (J_+^2 + J_-^2)
//
// restricted to the J = N_p/2 multiplet. Energies are in units of the level
// spacing epsilon.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lmg {

/// The J = N_p/2 multiplet. Basis index i carries the J_z label m = i - J,
/// so m runs -N_p/2 ... +N_p/2 in increasing order.
class QuasiSpinBasis {
 public:
  /// Throws InvalidArgument unless n_particles is even and >= 2.
  explicit QuasiSpinBasis(int n_particles);

  int n_particles() const { return n_particles_; }
  int dimension() const { return n_particles_ + 1; }
  /// Largest J_z label, J = N_p/2.
  int j() const { return n_particles_ / 2; }

  int m_label(int index) const { return index - j(); }
  int index_of(int m) const { return m + j(); }
  std::vector<int> m_labels() const;

  friend bool operator==(const QuasiSpinBasis&, const QuasiSpinBasis&) = default;

 private:
  int n_particles_;
};

/// <j, m+1 | J_+ | j, m> = sqrt(j(j+1) - m(m+1)).
double raising_element(int j, int m);

/// <j, m+2 | J_+^2 | j, m>.
double raising_squared_element(int j, int m);

struct LmgHamiltonian {
  QuasiSpinBasis basis;
  double chi;
  Eigen::MatrixXd matrix;
};

LmgHamiltonian build_hamiltonian(const QuasiSpinBasis& basis, double chi);

struct SpectrumResult {
  /// Ascending.
  Eigen::VectorXd eigenvalues;
  /// Column k is level k expanded in the J_z basis, with its
  /// largest-magnitude component positive.
  Eigen::MatrixXd eigenvectors;
};

/// Dense symmetric diagonalization. Throws NumericalError if the matrix is
/// not symmetric or the solver does not converge.
SpectrumResult solve_spectrum(const LmgHamiltonian& h);

/// E_1 - E_0 over the full spectrum (both parity sectors).
double energy_gap(const QuasiSpinBasis& basis, double chi);

struct GapCurve {
  std::vector<double> chi_grid;
  std::vector<double> gap_values;
};

/// Evaluates energy_gap on every grid point. `workers` > 1 splits the grid
/// across threads; the result does not depend on the worker count.
GapCurve gap_curve(const QuasiSpinBasis& basis, std::span<const double> chi_grid,
                   int workers = 1);

/// Finite-difference derivative of order 1, 2 or 3 on a uniform grid.
/// Interior points use central stencils and the edges one-sided stencils,
/// all with O(h^2) truncation error.
std::vector<double> gap_derivatives(const GapCurve& curve, int order);

struct RegionBoundaries {
  /// Steepest descent of the gap: the minimum of the first derivative,
  /// i.e. the upward zero crossing of the second derivative.
  double first;
  /// The following maximum of the second derivative, i.e. the downward
  /// zero crossing of the third derivative.
  double second;
};

/// Locates the two values of chi that split the gap curve into the
/// mean-field, transition and tunneling regions. Throws InvalidArgument
/// when either feature is absent from the grid.
RegionBoundaries detect_region_boundaries(const GapCurve& curve);

struct ParityBlocks {
  Eigen::MatrixXd even_block;  ///< even m, ascending
  Eigen::MatrixXd odd_block;   ///< odd m, ascending
  int even_dimension() const { return static_cast<int>(even_block.rows()); }
  int odd_dimension() const { return static_cast<int>(odd_block.rows()); }
};

/// Splits the matrix into even-m and odd-m blocks. Throws NumericalError if
/// any entry coupling the two sectors is nonzero.
ParityBlocks check_parity_blocks(const LmgHamiltonian& h);

/// max_k |E_k + E_{N-1-k}|. Throws NumericalError if the middle level of the
/// odd-dimensional spectrum deviates from zero by more than `tolerance`.
double check_spectral_reflection(const SpectrumResult& spectrum, double tolerance = 1e-10);

/// start, start + step, ... up to and including stop (within step/2).
std::vector<double> uniform_grid(double start, double stop, double step);

}  // namespace lmg

#endif  // LMG_QUASI_SPIN_HPP
