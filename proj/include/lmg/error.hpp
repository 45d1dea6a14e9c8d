#ifndef LMG_ERROR_HPP
#define LMG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lmg {

/// Raised when an input violates a precondition (bad particle number,
/// malformed grid, unnormalized state, ...). The CLI maps it to exit status 1.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a computation fails or a numerical invariant is violated
/// (eigensolver failure, unconverged series, symmetry broken beyond
/// tolerance). The CLI maps it to exit status 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lmg

#endif  // LMG_ERROR_HPP
