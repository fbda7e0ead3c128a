#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qpt/rdm.hpp"

namespace qpt {

// Binary (Shannon) entropy of {p, 1-p} in bits; 0*log 0 == 0.
double binary_entropy(double p);

// Eigenvalue-based von Neumann entropy; eigenvalues below 1e-14 contribute
// zero. log_base must exceed 1 (typically 2 or e).
double vn_entropy(const Eigen::MatrixXcd& rho, double log_base = 2.0);
double vn_entropy_from_eigs(const std::vector<double>& eigs, double log_base);

// Wootters concurrence of a two-qubit density matrix, in [0, 1].
double concurrence(const Eigen::Matrix4cd& rho);

// Entanglement of formation (bits) from concurrence / from a density matrix.
double eof_from_concurrence(double c);
double eof(const Eigen::Matrix4cd& rho);

// Entanglement of one site with the rest of a pure state (bits).
double one_vs_rest_entropy(const FullState& psi, int site);

struct TauConfig {
  int anchor = 1;             // anchor site (1-based)
  int r_max = -1;             // pair-distance cutoff; -1 = all pairs
  double tail_tol = 0.0;      // stop when the EOF^2 term drops below this
  bool exploit_reflection = false;  // halve pair work via r <-> N-r symmetry
};

// Residual multipartite entanglement:
//   tau = E1(anchor)^2 - sum_{k != anchor} EOF(anchor, k)^2   (all in bits).
// exploit_reflection is only valid for one-site translation-invariant states.
double tau_sef(const FullState& psi, const TauConfig& cfg = {});
double tau_sef(const Eigen::VectorXcd& psi, int n_sites, int anchor = 1);

struct DiscordConfig {
  int n_theta = 64;        // coarse grid points over theta in [0, pi/2]
  int n_phi = 128;         // coarse grid points over phi in [0, 2pi)
  int refine_levels = 6;   // recursive local refinements around the incumbent
  double shrink = 5.0;     // window shrink factor per level
  double tol = 1e-10;      // stop once the incumbent improves by less
  bool measure_first = false;  // measured qubit: second slot by default
  double log_base = 2.0;
  void validate() const;
};

// Quantum discord of a two-qubit state under projective measurement of the
// configured slot, minimizing the conditional entropy over the measurement
// basis angles. Result clipped to 0 when within 1e-8 below zero; further
// negative values raise a numerical-integrity error.
double quantum_discord(const Eigen::Matrix4cd& rho,
                       const DiscordConfig& cfg = {});

}  // namespace qpt
