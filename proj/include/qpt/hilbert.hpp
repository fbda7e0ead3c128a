#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "qpt/model.hpp"

namespace qpt {

// Basis of an S_z sector (or the full space) in ascending bitmask order.
struct BasisMap {
  int n_sites = 0;
  std::optional<int> n_up;       // empty = full 2^N space
  std::vector<uint32_t> states;  // ascending

  static BasisMap full_space(int n_sites);
  static BasisMap sz_sector(int n_sites, int n_up);

  std::size_t dim() const { return states.size(); }
  bool contains(uint32_t state) const;
  std::size_t index_of(uint32_t state) const;  // throws NumericalError if absent
};

// Real symmetric sparse Hamiltonian in CSR form over a BasisMap. All four
// families have real matrix elements in the standard basis.
struct SparseHamiltonian {
  ModelSpec spec;
  BasisMap basis;
  std::vector<std::size_t> row_ptr;
  std::vector<uint32_t> col;
  std::vector<double> val;

  std::size_t dim() const { return basis.dim(); }
  void apply(const double* x, double* y) const;  // y = H x
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
};

// Assemble the Hamiltonian. `sector_n_up` restricts to an S_z sector and is
// only legal for S_z-conserving families (XXZ, SSH).
SparseHamiltonian build_hamiltonian(const ModelSpec& spec,
                                    std::optional<int> sector_n_up = std::nullopt);

// Cyclic translation by `shift` sites of a full-space amplitude vector
// (site i -> site i+shift).
Eigen::VectorXd translate(const Eigen::VectorXd& v, int n_sites, int shift);

}  // namespace qpt
