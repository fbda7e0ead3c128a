#pragma once

#include <stdexcept>
#include <string>

namespace qpt {

// Error taxonomy, mapped to process exit codes by the CLI:
//   UsageError -> 1, NumericalError -> 2, ValidationError -> 3.

// Malformed requests: bad parameter names, ranges, preconditions.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical-integrity failures: invariant violations, non-convergence,
// out-of-tolerance density matrices.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Cross-validation suite reported disagreement.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qpt
