#pragma once

#include <Eigen/Dense>

#include "qpt/eigensolver.hpp"

namespace qpt {

// Ground state expanded to the full 2^N amplitude vector so that many pair
// extractions reuse one expansion. Sector-stored states are scattered into
// their bitmask positions.
struct FullState {
  int n_sites = 0;
  Eigen::VectorXd amplitudes;  // length 2^N

  static FullState from(const GroundState& gs);
};

// One-site reduced density matrix in the (|up>, |down>) basis.
// Hermitian, unit trace, eigenvalues in [-1e-10, 1 + 1e-10]; violations raise
// a numerical-integrity error.
Eigen::Matrix2cd rdm1(const FullState& psi, int site);
Eigen::Matrix2cd rdm1(const Eigen::VectorXcd& amplitudes, int n_sites, int site);

// Two-site reduced density matrix in the (|uu>, |ud>, |du>, |dd>) basis with
// site i in the first slot. Hermitian, unit trace, positive semidefinite
// within 1e-10; violations raise a numerical-integrity error.
Eigen::Matrix4cd rdm2(const FullState& psi, int i, int j);
Eigen::Matrix4cd rdm2(const Eigen::VectorXcd& amplitudes, int n_sites, int i,
                      int j);

}  // namespace qpt
