#include "qpt/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qpt {

Model model_from_string(const std::string& s) {
  if (s == "xxz") return Model::XXZ;
  if (s == "ssh") return Model::SSH;
  if (s == "sshxy") return Model::SSHXY;
  if (s == "xymi") return Model::XYMI;
  throw UsageError("unknown model: " + s);
}

std::string to_string(Model m) {
  switch (m) {
    case Model::XXZ: return "xxz";
    case Model::SSH: return "ssh";
    case Model::SSHXY: return "sshxy";
    case Model::XYMI: return "xymi";
  }
  return "?";
}

void ModelSpec::set_param(const std::string& name, double value) {
  if (name == "delta") delta = value;
  else if (name == "eta") eta = value;
  else if (name == "gamma1") gamma1 = value;
  else if (name == "gamma2") gamma2 = value;
  else if (name == "gamma") gamma = value;
  else if (name == "lambda") lambda = value;
  else if (name == "alpha") alpha = value;
  else if (name == "beta") beta = value;
  else throw UsageError("unknown parameter: " + name);
}

double ModelSpec::get_param(const std::string& name) const {
  if (name == "delta") return delta;
  if (name == "eta") return eta;
  if (name == "gamma1") return gamma1;
  if (name == "gamma2") return gamma2;
  if (name == "gamma") return gamma;
  if (name == "lambda") return lambda;
  if (name == "alpha") return alpha;
  if (name == "beta") return beta;
  throw UsageError("unknown parameter: " + name);
}

void ModelSpec::validate() const {
  if (n_sites < 3) throw UsageError("n_sites must be >= 3");
  if (n_sites > 28) throw UsageError("n_sites too large for exact diagonalization");
  if ((family == Model::SSH || family == Model::SSHXY) && n_sites % 2 != 0)
    throw UsageError(to_string(family) + " requires an even number of sites");
  for (double c : {delta, eta, gamma1, gamma2, gamma, lambda, alpha, beta})
    if (!std::isfinite(c)) throw UsageError("couplings must be finite");
}

BasisMap BasisMap::full_space(int n_sites) {
  BasisMap b;
  b.n_sites = n_sites;
  const uint32_t dim = uint32_t{1} << n_sites;
  b.states.resize(dim);
  for (uint32_t s = 0; s < dim; ++s) b.states[s] = s;
  return b;
}

BasisMap BasisMap::sz_sector(int n_sites, int n_up) {
  if (n_up < 0 || n_up > n_sites)
    throw UsageError("sector occupation out of range");
  BasisMap b;
  b.n_sites = n_sites;
  b.n_up = n_up;
  const uint32_t dim = uint32_t{1} << n_sites;
  for (uint32_t s = 0; s < dim; ++s)
    if (std::popcount(s) == n_up) b.states.push_back(s);
  return b;
}

bool BasisMap::contains(uint32_t state) const {
  if (!n_up) return state < (uint32_t{1} << n_sites);
  return std::popcount(state) == *n_up;
}

std::size_t BasisMap::index_of(uint32_t state) const {
  if (!n_up) {
    if (state >= (uint32_t{1} << n_sites))
      throw NumericalError("basis lookup outside the space");
    return state;
  }
  auto it = std::lower_bound(states.begin(), states.end(), state);
  if (it == states.end() || *it != state)
    throw NumericalError("basis lookup outside the sector");
  return static_cast<std::size_t>(it - states.begin());
}

void SparseHamiltonian::apply(const double* x, double* y) const {
  const std::size_t n = dim();
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

Eigen::VectorXd SparseHamiltonian::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim())
    throw UsageError("apply: vector length does not match the basis");
  Eigen::VectorXd y(x.size());
  apply(x.data(), y.data());
  return y;
}

Eigen::MatrixXd SparseHamiltonian::dense() const {
  const std::size_t n = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      m(r, col[k]) += val[k];
  return m;
}

namespace {

struct CooEntry {
  uint32_t row, col;
  double v;
};

inline int bit(uint32_t s, int p) { return (s >> p) & 1; }
// sz eigenvalue of site bit p: up (+1) / down (-1)
inline double zsign(uint32_t s, int p) { return bit(s, p) ? 1.0 : -1.0; }

}  // namespace

SparseHamiltonian build_hamiltonian(const ModelSpec& spec,
                                    std::optional<int> sector_n_up) {
  spec.validate();
  if (sector_n_up && !spec.conserves_sz())
    throw UsageError("S_z sector requested for " + to_string(spec.family) +
                     ", which does not conserve S_z");

  const int n = spec.n_sites;
  SparseHamiltonian h;
  h.spec = spec;
  h.basis = sector_n_up ? BasisMap::sz_sector(n, *sector_n_up)
                        : BasisMap::full_space(n);

  const auto& basis = h.basis;
  const std::size_t dim = basis.dim();
  std::vector<CooEntry> coo;
  coo.reserve(dim * (static_cast<std::size_t>(n) + 1));

  // Exchange bond sx sx + g_yy/g_xx asymmetry:
  //   (sx sx) flips both bits always; (sy sy) flips with sign -1 when the two
  //   bits are equal, +1 when they differ. A bond cxx*sxsx + cyy*sysy thus has
  //   off-diagonal element (cxx + cyy) on differing bits and (cxx - cyy) on
  //   equal bits, always toward the double-flipped state.
  auto add_xy_bond = [&](uint32_t s, std::size_t a, int p, int q, double cxx,
                         double cyy) {
    if (p == q) {
      // Coinciding endpoints (wrapped multi-site terms on tiny rings):
      // sx sx = sy sy = identity, so the bond is diagonal.
      if (cxx + cyy != 0.0)
        coo.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(a),
                       cxx + cyy});
      return;
    }
    const bool differ = bit(s, p) != bit(s, q);
    const double elem = differ ? (cxx + cyy) : (cxx - cyy);
    if (elem == 0.0) return;
    const uint32_t t = s ^ (uint32_t{1} << p) ^ (uint32_t{1} << q);
    coo.push_back({static_cast<uint32_t>(a),
                   static_cast<uint32_t>(basis.index_of(t)), elem});
  };

  for (std::size_t a = 0; a < dim; ++a) {
    const uint32_t s = basis.states[a];
    double diag = 0.0;
    switch (spec.family) {
      case Model::XXZ:
        for (int j = 0; j < n; ++j) {
          const int p = j, q = (j + 1) % n;
          diag += spec.delta * zsign(s, p) * zsign(s, q);
          add_xy_bond(s, a, p, q, 1.0, 1.0);
        }
        break;
      case Model::SSH:
        for (int c = 0; c < n / 2; ++c) {
          const double intra = (1.0 + spec.eta) / 2.0;
          const double inter = (1.0 - spec.eta) / 2.0;
          add_xy_bond(s, a, 2 * c, 2 * c + 1, -intra, -intra);
          add_xy_bond(s, a, 2 * c + 1, (2 * c + 2) % n, -inter, -inter);
        }
        break;
      case Model::SSHXY:
        for (int c = 0; c < n / 2; ++c) {
          add_xy_bond(s, a, 2 * c, 2 * c + 1, -(1.0 + spec.gamma1) / 2.0,
                      -(1.0 - spec.gamma1) / 2.0);
          add_xy_bond(s, a, 2 * c + 1, (2 * c + 2) % n,
                      -(1.0 + spec.gamma2) / 2.0, -(1.0 - spec.gamma2) / 2.0);
        }
        break;
      case Model::XYMI:
        for (int j = 0; j < n; ++j) {
          const int p = j, q = (j + 1) % n;
          add_xy_bond(s, a, p, q, -(1.0 + spec.gamma) / 2.0,
                      -(1.0 - spec.gamma) / 2.0);
          diag += -spec.lambda * zsign(s, j);
          // Three-site term: flips the neighbors of j, weighted by sz_j.
          // (sx sz sx + sy sz sy) on (j-1, j, j+1) cancels on equal outer
          // bits, adds on differing ones, like an exchange bond with the
          // middle sz as a multiplicative factor.
          if (spec.alpha != 0.0) {
            const int l = (j + n - 1) % n, r = (j + 1) % n;
            add_xy_bond(s, a, l, r, -spec.alpha * zsign(s, j),
                        -spec.alpha * zsign(s, j));
          }
          // Four-site term: same structure with two middle sz factors and
          // outer sites at distance 3.
          if (spec.beta != 0.0) {
            const int l = (j + n - 1) % n, r = (j + 2) % n;
            const double zz = zsign(s, j) * zsign(s, (j + 1) % n);
            add_xy_bond(s, a, l, r, -spec.beta * zz, -spec.beta * zz);
          }
        }
        break;
    }
    if (diag != 0.0)
      coo.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(a), diag});
  }

  // Compress: sort by (row, col), merge duplicates, drop exact zeros.
  std::sort(coo.begin(), coo.end(), [](const CooEntry& x, const CooEntry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  h.row_ptr.assign(dim + 1, 0);
  h.col.reserve(coo.size());
  h.val.reserve(coo.size());
  for (std::size_t i = 0; i < coo.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < coo.size() && coo[j].row == coo[i].row && coo[j].col == coo[i].col)
      sum += coo[j++].v;
    if (sum != 0.0) {
      h.col.push_back(coo[i].col);
      h.val.push_back(sum);
      ++h.row_ptr[coo[i].row + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < dim; ++r) h.row_ptr[r + 1] += h.row_ptr[r];
  return h;
}

Eigen::VectorXd translate(const Eigen::VectorXd& v, int n_sites, int shift) {
  const uint32_t dim = uint32_t{1} << n_sites;
  if (static_cast<uint32_t>(v.size()) != dim)
    throw UsageError("translate expects a full-space vector");
  const int k = ((shift % n_sites) + n_sites) % n_sites;
  if (k == 0) return v;
  const uint32_t mask = dim - 1;
  Eigen::VectorXd out(v.size());
  for (uint32_t s = 0; s < dim; ++s) {
    const uint32_t t = ((s << k) | (s >> (n_sites - k))) & mask;
    out[t] = v[s];
  }
  return out;
}

}  // namespace qpt
