#include "qpt/rdm.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>

namespace qpt {
namespace {

void check_site(int site, int n) {
  if (site < 1 || site > n) throw UsageError("site index out of range");
}

void check_rho(const Eigen::MatrixXcd& rho, double tol, const char* what) {
  const double tr_err = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
  if (tr_err > tol)
    throw NumericalError(std::string(what) + ": trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const auto& w = es.eigenvalues();
  if (w.minCoeff() < -1e-10 || w.maxCoeff() > 1.0 + 1e-10)
    throw NumericalError(std::string(what) +
                         ": eigenvalues outside [0, 1] beyond tolerance");
}

// rho(m, m') = sum_rest psi[rest | pat_m] * conj(psi[rest | pat_m']), where
// pat_m plants the two marked bits according to the (uu, ud, du, dd) slot
// order. One sweep over the 2^(N-2) rest-configurations.
template <typename Vec>
Eigen::Matrix4cd rdm2_impl(const Vec& v, int n, int i, int j) {
  check_site(i, n);
  check_site(j, n);
  if (i == j) throw UsageError("rdm2 requires two distinct sites");
  const uint32_t dim = uint32_t{1} << n;
  if (static_cast<uint32_t>(v.size()) != dim)
    throw UsageError("rdm2: amplitude vector length does not match n_sites");
  const uint32_t mi = uint32_t{1} << (i - 1);
  const uint32_t mj = uint32_t{1} << (j - 1);
  const uint32_t pat[4] = {mi | mj, mi, mj, 0};
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (uint32_t rest = 0; rest < dim; ++rest) {
    if (rest & (mi | mj)) continue;
    std::complex<double> a[4];
    for (int m = 0; m < 4; ++m) a[m] = v[rest | pat[m]];
    for (int m = 0; m < 4; ++m)
      for (int mp = 0; mp < 4; ++mp) rho(m, mp) += a[m] * std::conj(a[mp]);
  }
  check_rho(rho, 1e-10, "rdm2");
  return rho;
}

template <typename Vec>
Eigen::Matrix2cd rdm1_impl(const Vec& v, int n, int site) {
  check_site(site, n);
  const uint32_t dim = uint32_t{1} << n;
  if (static_cast<uint32_t>(v.size()) != dim)
    throw UsageError("rdm1: amplitude vector length does not match n_sites");
  const uint32_t mi = uint32_t{1} << (site - 1);
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (uint32_t rest = 0; rest < dim; ++rest) {
    if (rest & mi) continue;
    const std::complex<double> up = v[rest | mi];
    const std::complex<double> dn = v[rest];
    rho(0, 0) += up * std::conj(up);
    rho(0, 1) += up * std::conj(dn);
    rho(1, 0) += dn * std::conj(up);
    rho(1, 1) += dn * std::conj(dn);
  }
  check_rho(rho, 1e-12, "rdm1");
  return rho;
}

}  // namespace

FullState FullState::from(const GroundState& gs) {
  FullState f;
  f.n_sites = gs.n_sites;
  const uint32_t dim = uint32_t{1} << gs.n_sites;
  if (!gs.n_up) {
    if (static_cast<uint32_t>(gs.amplitudes.size()) != dim)
      throw UsageError("ground state length does not match n_sites");
    f.amplitudes = gs.amplitudes;
    return f;
  }
  const BasisMap basis = BasisMap::sz_sector(gs.n_sites, *gs.n_up);
  if (static_cast<std::size_t>(gs.amplitudes.size()) != basis.dim())
    throw UsageError("ground state length does not match its sector");
  f.amplitudes = Eigen::VectorXd::Zero(dim);
  for (std::size_t a = 0; a < basis.dim(); ++a)
    f.amplitudes[basis.states[a]] = gs.amplitudes[a];
  return f;
}

Eigen::Matrix2cd rdm1(const FullState& psi, int site) {
  return rdm1_impl(psi.amplitudes, psi.n_sites, site);
}

Eigen::Matrix2cd rdm1(const Eigen::VectorXcd& amplitudes, int n_sites,
                      int site) {
  return rdm1_impl(amplitudes, n_sites, site);
}

Eigen::Matrix4cd rdm2(const FullState& psi, int i, int j) {
  return rdm2_impl(psi.amplitudes, psi.n_sites, i, j);
}

Eigen::Matrix4cd rdm2(const Eigen::VectorXcd& amplitudes, int n_sites, int i,
                      int j) {
  return rdm2_impl(amplitudes, n_sites, i, j);
}

}  // namespace qpt
