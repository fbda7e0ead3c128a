#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "qpt/hilbert.hpp"

namespace qpt {

// Ground state expressed in the basis of the Hamiltonian it was computed
// from. Amplitudes are real: every supported family has a real symmetric
// representation in the standard basis.
struct GroundState {
  Eigen::VectorXd amplitudes;
  double energy = 0.0;
  double gap = 0.0;          // E1 - E0
  bool degenerate = false;   // gap below 1e-8 * max(1, |E0|)
  std::optional<int> n_up;   // sector label, empty = full space
  int n_sites = 0;
};

// Dimension at or below which the dense eigensolver is used; larger problems
// go through the sparse iterative path.
inline constexpr std::size_t kDenseThreshold = 1024;

// Lowest eigenpair plus the gap. tol must lie in (0, 1e-6]; `seed` fixes the
// iterative starting vector so repeated runs are bitwise reproducible.
GroundState ground_state(const SparseHamiltonian& h, double tol = 1e-10,
                         uint64_t seed = 12345);

// k lowest eigenvalues in ascending order, 1 <= k <= 8.
std::vector<double> low_spectrum(const SparseHamiltonian& h, int k,
                                 double tol = 1e-10, uint64_t seed = 12345);

}  // namespace qpt
