#include "qpt/measures.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace qpt {
namespace {

using cd = std::complex<double>;

// Binary entropy in an arbitrary log base; exactly zero at the endpoints.
double hb(double p, double log_base) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  const double q = 1.0 - p;
  return (-p * std::log(p) - q * std::log(q)) / std::log(log_base);
}

Eigen::Matrix4cd swap_slots(const Eigen::Matrix4cd& rho) {
  static constexpr int perm[4] = {0, 2, 1, 3};
  Eigen::Matrix4cd out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = rho(perm[i], perm[j]);
  return out;
}

// Largest magnitude found outside the X sparsity pattern (including the
// imaginary parts of the pattern entries).
double off_x_pattern(const Eigen::Matrix4cd& r) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool on_pattern = (i == j) || (i + j == 3);
      if (on_pattern)
        m = std::max(m, std::abs(r(i, j).imag()));
      else
        m = std::max(m, std::abs(r(i, j)));
    }
  return m;
}

}  // namespace

double binary_entropy(double p) { return hb(p, 2.0); }

double vn_entropy_from_eigs(const std::vector<double>& eigs, double log_base) {
  if (!(log_base > 1.0)) throw UsageError("entropy log base must exceed 1");
  double s = 0.0;
  for (double w : eigs) {
    if (w < 1e-14) continue;
    s -= w * std::log(w);
  }
  return s / std::log(log_base);
}

double vn_entropy(const Eigen::MatrixXcd& rho, double log_base) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const auto& w = es.eigenvalues();
  return vn_entropy_from_eigs({w.data(), w.data() + w.size()}, log_base);
}

double concurrence(const Eigen::Matrix4cd& rho) {
  // Spin-flip conjugation: F = sy (x) sy is the real antidiagonal
  // (-1, 1, 1, -1) in the (uu, ud, du, dd) basis.
  Eigen::Matrix4cd F = Eigen::Matrix4cd::Zero();
  F(0, 3) = -1.0;
  F(1, 2) = 1.0;
  F(2, 1) = 1.0;
  F(3, 0) = -1.0;
  // Taking square roots of the eigenvalues of rho * F rho* F loses half the
  // working precision whenever an eigenvalue is zero up to rounding (every
  // near-pure input).  Writing rho = X X^dagger with X = U sqrt(D) turns the
  // same quantities into the singular values of the complex symmetric matrix
  // X^T F X, which come out at full precision.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  if (es.info() != Eigen::Success)
    throw NumericalError("concurrence: eigen decomposition failed");
  Eigen::Matrix4cd X;
  for (int k = 0; k < 4; ++k) {
    const double w = es.eigenvalues()[k];
    if (w < -1e-12)
      throw NumericalError("concurrence: density matrix eigenvalue below -1e-12");
    X.col(k) = es.eigenvectors().col(k) * std::sqrt(std::max(0.0, w));
  }
  const Eigen::Matrix4cd T = X.transpose() * F * X;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(T);
  const auto& lam = svd.singularValues();  // sorted descending
  return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

double eof_from_concurrence(double c) {
  if (c < 0.0 || c > 1.0 + 1e-12)
    throw UsageError("concurrence must lie in [0, 1]");
  c = std::min(c, 1.0);
  const double x = (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0;
  return binary_entropy(x);
}

double eof(const Eigen::Matrix4cd& rho) {
  return eof_from_concurrence(concurrence(rho));
}

double one_vs_rest_entropy(const FullState& psi, int site) {
  return vn_entropy(rdm1(psi, site), 2.0);
}

namespace {

int ring_wrap(int anchor, int r, int n) { return (anchor - 1 + r) % n + 1; }

}  // namespace

double tau_sef(const FullState& psi, const TauConfig& cfg) {
  const int n = psi.n_sites;
  if (cfg.anchor < 1 || cfg.anchor > n) throw UsageError("anchor out of range");
  const double e1 = one_vs_rest_entropy(psi, cfg.anchor);
  double tau = e1 * e1;
  if (cfg.exploit_reflection) {
    // Pairs at separations r and N-r from the anchor carry identical
    // measures on a one-site translation-invariant ring.
    int below = 0;
    for (int r = 1; 2 * r <= n; ++r) {
      if (cfg.r_max >= 1 && r > cfg.r_max) break;
      const double weight = (2 * r == n) ? 1.0 : 2.0;
      const double e = eof(rdm2(psi, cfg.anchor, ring_wrap(cfg.anchor, r, n)));
      tau -= weight * e * e;
      if (cfg.tail_tol > 0.0) {
        below = (e * e < cfg.tail_tol) ? below + 1 : 0;
        if (below >= 2) break;
      }
    }
  } else {
    for (int r = 1; r < n; ++r) {
      if (cfg.r_max >= 1 && std::min(r, n - r) > cfg.r_max) continue;
      const double e = eof(rdm2(psi, cfg.anchor, ring_wrap(cfg.anchor, r, n)));
      tau -= e * e;
    }
  }
  return tau;
}

double tau_sef(const Eigen::VectorXcd& psi, int n_sites, int anchor) {
  if (anchor < 1 || anchor > n_sites) throw UsageError("anchor out of range");
  const double e1 = vn_entropy(rdm1(psi, n_sites, anchor), 2.0);
  double tau = e1 * e1;
  for (int r = 1; r < n_sites; ++r) {
    const double e =
        eof(rdm2(psi, n_sites, anchor, ring_wrap(anchor, r, n_sites)));
    tau -= e * e;
  }
  return tau;
}

void DiscordConfig::validate() const {
  if (n_theta < 16 || n_phi < 16)
    throw UsageError("discord coarse grid must be at least 16 x 16");
  if (!(tol > 0.0)) throw UsageError("discord tolerance must be positive");
  if (!(shrink > 1.0)) throw UsageError("discord shrink factor must exceed 1");
  if (refine_levels < 0) throw UsageError("discord refine_levels must be >= 0");
  const bool base2 = std::abs(log_base - 2.0) < 1e-12;
  const bool basee = std::abs(log_base - std::exp(1.0)) < 1e-12;
  if (!base2 && !basee) throw UsageError("discord log base must be 2 or e");
}

double quantum_discord(const Eigen::Matrix4cd& rho, const DiscordConfig& cfg) {
  cfg.validate();
  const Eigen::Matrix4cd r = cfg.measure_first ? swap_slots(rho) : rho;

  // Marginal of the measured (second) slot.
  Eigen::Matrix2cd rb;
  for (int j = 0; j < 2; ++j)
    for (int jp = 0; jp < 2; ++jp) rb(j, jp) = r(j, jp) + r(2 + j, 2 + jp);
  const double sb = vn_entropy(rb, cfg.log_base);
  const double sab = vn_entropy(r, cfg.log_base);

  // Conditional entropy of the unmeasured qubit after projecting the measured
  // slot onto v0 = (cos t, e^{i p} sin t), v1 = (e^{-i p} sin t, -cos t).
  std::function<double(double, double)> cond;
  if (off_x_pattern(r) < 1e-10) {
    // X-form closed path: 2x2 conditional blocks have an analytic spectrum.
    const double a = r(0, 0).real(), b = r(1, 1).real();
    const double c = r(2, 2).real(), d = r(3, 3).real();
    const double w = r(0, 3).real(), v = r(1, 2).real();
    const double base = cfg.log_base;
    cond = [=](double th, double ph) {
      const double c2 = std::cos(th) * std::cos(th);
      const double s2 = 1.0 - c2;
      const double A = (v + w) * std::cos(ph);
      const double B = (w - v) * std::sin(ph);
      const double m01sq = c2 * s2 * (A * A + B * B);
      double tot = 0.0;
      const double occ[2][2] = {{c2, s2}, {s2, c2}};
      for (const auto& o : occ) {
        const double m00 = o[0] * a + o[1] * b;
        const double m11 = o[0] * c + o[1] * d;
        const double p = m00 + m11;
        if (p > 1e-15) {
          const double disc =
              std::sqrt((m00 - m11) * (m00 - m11) + 4.0 * m01sq);
          tot += p * hb((p + disc) / (2.0 * p), base);
        }
      }
      return tot;
    };
  } else {
    const double base = cfg.log_base;
    cond = [r, base](double th, double ph) {
      const double ct = std::cos(th), st = std::sin(th);
      const cd eip(std::cos(ph), std::sin(ph));
      const cd v0[2] = {cd(ct, 0.0), eip * st};
      const cd v1[2] = {std::conj(eip) * st, cd(-ct, 0.0)};
      double tot = 0.0;
      for (const cd* vk : {v0, v1}) {
        cd m00(0, 0), m01(0, 0), m11(0, 0);
        for (int j = 0; j < 2; ++j)
          for (int jp = 0; jp < 2; ++jp) {
            const cd f = std::conj(vk[j]) * vk[jp];
            m00 += f * r(j, jp);
            m01 += f * r(j, 2 + jp);
            m11 += f * r(2 + j, 2 + jp);
          }
        const double p = m00.real() + m11.real();
        if (p > 1e-15) {
          const double half = (m00.real() - m11.real()) / 2.0;
          const double root = std::sqrt(half * half + std::norm(m01));
          const double lamp = (m00.real() + m11.real()) / 2.0 + root;
          tot += p * hb(lamp / p, base);
        }
      }
      return tot;
    };
  }

  // Coarse grid: theta in [0, pi/2] inclusive, phi in [0, 2pi) exclusive,
  // scanned theta-major with strictly-lower updates so ties resolve to the
  // lowest theta, then the lowest phi.  The conditional-entropy surface can
  // hold several well-separated valleys whose depths differ by less than the
  // coarse sampling error, so the scan keeps the best few mutually separated
  // grid points and every one of them seeds its own local refinement; the
  // result is the best refined incumbent overall.
  const double pi = std::acos(-1.0);
  struct Seed {
    double val, th, ph;
  };
  constexpr int kMaxSeeds = 4;
  const double sep_t = (pi / 2.0) / 16.0;
  const double sep_p = (2.0 * pi) / 16.0;
  std::vector<Seed> seeds;
  seeds.reserve(kMaxSeeds + 1);
  const auto by_val = [](const Seed& x, const Seed& y) { return x.val < y.val; };
  for (int it = 0; it < cfg.n_theta; ++it) {
    const double th = (pi / 2.0) * it / (cfg.n_theta - 1);
    for (int ip = 0; ip < cfg.n_phi; ++ip) {
      const double ph = 2.0 * pi * ip / cfg.n_phi;
      const double v = cond(th, ph);
      bool shares_valley = false;
      for (Seed& s : seeds) {
        const double dp = std::abs(s.ph - ph);
        if (std::abs(s.th - th) <= sep_t &&
            std::min(dp, 2.0 * pi - dp) <= sep_p) {
          if (v < s.val) s = {v, th, ph};
          shares_valley = true;
          break;
        }
      }
      if (!shares_valley) {
        seeds.push_back({v, th, ph});
        std::stable_sort(seeds.begin(), seeds.end(), by_val);
        if (static_cast<int>(seeds.size()) > kMaxSeeds) seeds.pop_back();
      }
    }
  }
  std::stable_sort(seeds.begin(), seeds.end(), by_val);

  double best = std::numeric_limits<double>::infinity();
  for (const Seed& seed : seeds) {
    double cur = seed.val, bt = seed.th, bp = seed.ph;
    double tw = pi / 2.0, pw = 2.0 * pi;
    for (int level = 0; level < cfg.refine_levels; ++level) {
      tw /= cfg.shrink;
      pw /= cfg.shrink;
      const double prev = cur;
      const double tlo = std::max(0.0, bt - tw / 2.0);
      const double thi = std::min(pi / 2.0, bt + tw / 2.0);
      const int npts = 17;
      for (int it = 0; it < npts; ++it) {
        const double th = tlo + (thi - tlo) * it / (npts - 1);
        for (int ip = 0; ip < npts; ++ip) {
          const double ph = (bp - pw / 2.0) + pw * ip / (npts - 1);
          const double v = cond(th, ph);
          if (v < cur) {
            cur = v;
            bt = th;
            bp = ph;
          }
        }
      }
      if (prev - cur < cfg.tol) break;
    }
    best = std::min(best, cur);
  }

  if (!std::isfinite(best))
    throw NumericalError("discord: non-finite conditional entropy");
  double qd = sb + best - sab;
  if (qd < 0.0) {
    if (qd < -1e-8)
      throw NumericalError("discord: negative beyond tolerance");
    qd = 0.0;
  }
  return qd;
}

}  // namespace qpt
