#pragma once

// Independent reference implementations for the test suites. Everything here
// is built from first principles (Kronecker products, cofactor expansions,
// exhaustive grids) so that agreement with the production code is evidence,
// not tautology.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "qpt/model.hpp"

namespace oracle {

using cd = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Single-site operators in *bitmask index order* (index 0 = down, 1 = up),
// matching the convention that bit i-1 of a basis state is 1 when site i is
// up. Note sy's sign layout is the (up,down)-ordered matrix with both axes
// reversed.
inline Matrix2cd sx_bit() {
  Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix2cd sy_bit() {
  Matrix2cd m;
  m << 0, cd(0, 1), cd(0, -1), 0;
  return m;
}
inline Matrix2cd sz_bit() {
  Matrix2cd m;
  m << -1, 0, 0, 1;
  return m;
}
inline Matrix2cd id2() { return Matrix2cd::Identity(); }

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Embed a single-site operator at 1-based site i of an N-site register.
// Site 1 owns the lowest bit, so it is the rightmost Kronecker factor.
inline MatrixXcd on_site(const Matrix2cd& op, int i, int n) {
  MatrixXcd m = MatrixXcd::Identity(1, 1);
  for (int s = n; s >= 1; --s) m = kron(m, s == i ? MatrixXcd(op) : MatrixXcd(id2()));
  return m;
}

// Dense 2^N Hamiltonian assembled term by term from the documented model
// definitions. Coinciding wrapped sites at tiny N are handled naturally by
// the matrix products.
inline MatrixXcd dense_h(const qpt::ModelSpec& s) {
  const int n = s.n_sites;
  const int dim = 1 << n;
  MatrixXcd h = MatrixXcd::Zero(dim, dim);
  auto wrap = [&](int j) { return (j - 1 + 2 * n) % n + 1; };
  auto sx = [&](int j) { return on_site(sx_bit(), wrap(j), n); };
  auto sy = [&](int j) { return on_site(sy_bit(), wrap(j), n); };
  auto sz = [&](int j) { return on_site(sz_bit(), wrap(j), n); };

  switch (s.family) {
    case qpt::Model::XXZ:
      for (int j = 1; j <= n; ++j)
        h += sx(j) * sx(j + 1) + sy(j) * sy(j + 1) +
             s.delta * sz(j) * sz(j + 1);
      break;
    case qpt::Model::SSH:
      for (int c = 1; c <= n / 2; ++c) {
        h -= 0.5 * (1 + s.eta) *
             (sx(2 * c - 1) * sx(2 * c) + sy(2 * c - 1) * sy(2 * c));
        h -= 0.5 * (1 - s.eta) *
             (sx(2 * c) * sx(2 * c + 1) + sy(2 * c) * sy(2 * c + 1));
      }
      break;
    case qpt::Model::SSHXY:
      for (int c = 1; c <= n / 2; ++c) {
        h -= 0.5 * (1 + s.gamma1) * sx(2 * c - 1) * sx(2 * c) +
             0.5 * (1 - s.gamma1) * sy(2 * c - 1) * sy(2 * c);
        h -= 0.5 * (1 + s.gamma2) * sx(2 * c) * sx(2 * c + 1) +
             0.5 * (1 - s.gamma2) * sy(2 * c) * sy(2 * c + 1);
      }
      break;
    case qpt::Model::XYMI:
      for (int j = 1; j <= n; ++j) {
        h -= 0.5 * (1 + s.gamma) * sx(j) * sx(j + 1) +
             0.5 * (1 - s.gamma) * sy(j) * sy(j + 1);
        h -= s.lambda * sz(j);
        h -= s.alpha *
             (sx(j - 1) * sz(j) * sx(j + 1) + sy(j - 1) * sz(j) * sy(j + 1));
        h -= s.beta * (sx(j - 1) * sz(j) * sz(j + 1) * sx(j + 2) +
                       sy(j - 1) * sz(j) * sz(j + 1) * sy(j + 2));
      }
      break;
  }
  return h;
}

// Partial trace of a full 2^N pure state down to one site, in the
// production (up, down) basis order.
inline Matrix2cd ptrace1(const VectorXcd& psi, int n, int site) {
  const uint32_t mask = 1u << (site - 1);
  Matrix2cd rho = Matrix2cd::Zero();
  const uint32_t dim = 1u << n;
  for (uint32_t a = 0; a < dim; ++a)
    for (uint32_t b = 0; b < dim; ++b) {
      if ((a & ~mask) != (b & ~mask)) continue;
      const int ia = (a & mask) ? 0 : 1;  // 0 = up in the output basis
      const int ib = (b & mask) ? 0 : 1;
      rho(ia, ib) += psi(a) * std::conj(psi(b));
    }
  return rho;
}

// Partial trace down to the ordered pair (i, j), output basis
// (uu, ud, du, dd) with site i in the first slot.
inline Matrix4cd ptrace2(const VectorXcd& psi, int n, int i, int j) {
  const uint32_t mi = 1u << (i - 1), mj = 1u << (j - 1);
  const uint32_t keep = mi | mj;
  auto slot = [&](uint32_t state) {
    const int upi = (state & mi) ? 1 : 0;
    const int upj = (state & mj) ? 1 : 0;
    return (1 - upi) * 2 + (1 - upj);  // uu=0, ud=1, du=2, dd=3
  };
  Matrix4cd rho = Matrix4cd::Zero();
  const uint32_t dim = 1u << n;
  for (uint32_t a = 0; a < dim; ++a)
    for (uint32_t b = 0; b < dim; ++b) {
      if ((a & ~keep) != (b & ~keep)) continue;
      rho(slot(a), slot(b)) += psi(a) * std::conj(psi(b));
    }
  return rho;
}

// Cofactor-expansion determinant, O(n!), for n <= 9: an LU-free reference.
inline double cofactor_det(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  double det = 0.0;
  double sign = 1.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == c) continue;
        minor(r - 1, cc++) = m(r, k);
      }
    }
    det += sign * m(0, c) * cofactor_det(minor);
    sign = -sign;
  }
  return det;
}

inline double entropy_of(const MatrixXcd& rho, double base) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = es.eigenvalues()(i);
    if (w > 1e-14) s -= w * std::log(w);
  }
  return s / std::log(base);
}

// Exhaustive-grid quantum discord: no X-form shortcut, explicit projectors,
// measurement on the second slot unless measure_first.
inline double brute_discord(const Matrix4cd& rho, int n_theta, int n_phi,
                            double base = 2.0, bool measure_first = false) {
  const double pi = 3.14159265358979323846;
  // Marginal of the measured qubit and of the unmeasured one.
  Matrix2cd rho_b = Matrix2cd::Zero(), rho_a = Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int ip = 0; ip < 2; ++ip)
      for (int j = 0; j < 2; ++j) {
        // index = first_slot * 2 + second_slot
        rho_a(i, ip) += rho(i * 2 + j, ip * 2 + j);
        rho_b(i, ip) += rho(j * 2 + i, j * 2 + ip);
      }
  const Matrix2cd meas = measure_first ? rho_a : rho_b;
  const double sb = entropy_of(meas, base);
  const double sab = entropy_of(rho, base);

  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < n_theta; ++it) {
    const double th = (pi / 2) * it / (n_theta - 1);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double ph = 2 * pi * ip / n_phi;
      const Eigen::Vector2cd v0(std::cos(th),
                                std::polar(std::sin(th), ph));
      const Eigen::Vector2cd v1(std::polar(std::sin(th), -ph),
                                -std::cos(th));
      double tot = 0.0;
      for (const auto& v : {v0, v1}) {
        const Matrix2cd proj = v * v.adjoint();
        Matrix4cd big = measure_first
                            ? kron(proj, MatrixXcd(id2()))
                            : kron(MatrixXcd(id2()), proj);
        const Matrix4cd post = big * rho * big;
        const double p = std::real(post.trace());
        if (p > 1e-15) tot += p * entropy_of(post / p, base);
      }
      best = std::min(best, tot);
    }
  }
  return sb + best - sab;
}

inline VectorXcd haar_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cd(g(rng), g(rng));
  return v / v.norm();
}

// Random physical X-form density matrix (real entries), as produced by the
// free-fermion pair extraction.
inline Matrix4cd random_x_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double d[4];
  double tot = 0.0;
  for (double& x : d) tot += (x = u(rng) + 1e-3);
  for (double& x : d) x /= tot;
  const double w = (2 * u(rng) - 1) * std::sqrt(d[0] * d[3]);
  const double v = (2 * u(rng) - 1) * std::sqrt(d[1] * d[2]);
  Matrix4cd rho = Matrix4cd::Zero();
  rho(0, 0) = d[0];
  rho(1, 1) = d[1];
  rho(2, 2) = d[2];
  rho(3, 3) = d[3];
  rho(0, 3) = rho(3, 0) = w;
  rho(1, 2) = rho(2, 1) = v;
  return rho;
}

}  // namespace oracle
