#ifndef LMG_SELFTEST_HPP
#define LMG_SELFTEST_HPP

#include <functional>
#include <string>
#include <vector>

#include "lmg/quasi_spin.hpp"

namespace lmg {

struct SelfTestCheck {
  std::string name;
  double tolerance;
  double residual;
  bool passed;
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;

  bool passed() const;
  /// One line per check: status, name, residual and tolerance. Contains
  /// no timing or other run-dependent text.
  std::string format() const;
};

using HamiltonianBuilder = std::function<LmgHamiltonian(const QuasiSpinBasis&, double)>;

/// Oracle and invariant checks at N_p = 2, 4 and 10. The matrix checks
/// (symmetry, parity, reflection, kernel oracle, gap normalization) use
/// `builder`, so a deliberately broken Hamiltonian can be injected.
SelfTestReport run_selftest(const HamiltonianBuilder& builder = build_hamiltonian);

}  // namespace lmg

#endif  // LMG_SELFTEST_HPP
