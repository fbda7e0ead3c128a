#pragma once

#include <string>

#include "qpt/errors.hpp"

namespace qpt {

enum class Model { XXZ, SSH, SSHXY, XYMI };

Model model_from_string(const std::string& s);
std::string to_string(Model m);

// Parameters of a periodic spin-1/2 chain Hamiltonian. Only the couplings
// used by the selected family are read; the others are ignored.
//
//   XXZ:    H =  sum_j [ sx_j sx_{j+1} + sy_j sy_{j+1} + delta sz_j sz_{j+1} ]
//   SSH:    H = -sum_c [ (1+eta)/2 (sx sx + sy sy) on bond (2c-1, 2c)
//                      + (1-eta)/2 (sx sx + sy sy) on bond (2c, 2c+1) ]
//   SSHXY:  H = -sum_c [ (1+g1)/2 sx sx + (1-g1)/2 sy sy  on bond (2c-1, 2c)
//                      + (1+g2)/2 sx sx + (1-g2)/2 sy sy  on bond (2c, 2c+1) ]
//   XYMI:   H = -sum_j [ (1+gamma)/2 sx_j sx_{j+1} + (1-gamma)/2 sy_j sy_{j+1} ]
//             - lambda sum_j sz_j
//             - alpha  sum_j [ sx_{j-1} sz_j sx_{j+1} + sy_{j-1} sz_j sy_{j+1} ]
//             - beta   sum_j [ sx_{j-1} sz_j sz_{j+1} sx_{j+2}
//                            + sy_{j-1} sz_j sz_{j+1} sy_{j+2} ]
//
// All sums wrap periodically (site N+1 = site 1). Sites are 1-based; site i
// maps to bit i-1 of the basis bitmask, bit value 1 = spin up.
struct ModelSpec {
  Model family = Model::XXZ;
  int n_sites = 8;
  double delta = 1.0;   // XXZ anisotropy
  double eta = 0.0;     // SSH dimerization
  double gamma1 = 0.0;  // SSHXY odd-bond anisotropy
  double gamma2 = 0.0;  // SSHXY even-bond anisotropy
  double gamma = 0.0;   // XYMI anisotropy
  double lambda = 0.0;  // XYMI transverse field
  double alpha = 0.0;   // XYMI three-site coupling
  double beta = 0.0;    // XYMI four-site coupling

  bool conserves_sz() const {
    return family == Model::XXZ || family == Model::SSH;
  }
  // Unit cell of the translation symmetry: 1 site for uniform chains,
  // 2 sites for the dimerized families.
  int translation_step() const {
    return (family == Model::SSH || family == Model::SSHXY) ? 2 : 1;
  }

  void set_param(const std::string& name, double value);
  double get_param(const std::string& name) const;
  void validate() const;  // throws UsageError
};

}  // namespace qpt
