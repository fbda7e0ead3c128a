#include "qpt/freefermion.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>

namespace qpt {

void FfParams::validate() const {
  if (n_sites < 3 || n_sites % 2 == 0)
    throw UsageError("free-fermion path requires an odd n_sites >= 3");
  if (r_max < 1) throw UsageError("r_max must be >= 1");
  if (tail_tol < 0.0) throw UsageError("tail tolerance must be >= 0");
  for (double c : {gamma, lambda, alpha, beta})
    if (!std::isfinite(c)) throw UsageError("couplings must be finite");
}

Dispersion dispersion(const FfParams& p, MomentumGrid grid) {
  p.validate();
  const int n = p.n_sites;
  const double pi = std::acos(-1.0);
  Dispersion d;
  d.grid = grid;
  d.x.resize(n);
  d.eps.resize(n);
  d.energy.resize(n);
  long double esum = 0.0L;
  double emin = std::numeric_limits<double>::infinity();
  int imin = 0;
  for (int i = 0; i < n; ++i) {
    const double k = (grid == MomentumGrid::Half) ? (i + 0.5) : (i + 1.0);
    const double x = 2.0 * pi * k / n;
    const double eps = p.lambda - std::cos(x) - 2.0 * p.alpha * std::cos(2.0 * x) -
                       2.0 * p.beta * std::cos(3.0 * x);
    const double en = std::hypot(eps, p.gamma * std::sin(x));
    d.x[i] = x;
    d.eps[i] = eps;
    d.energy[i] = en;
    esum += en;
    if (en < emin) {
      emin = en;
      imin = i;
    }
  }
  // Parity constraint: the fermion-number parity of the vacuum must match the
  // parity the grid's boundary condition requires. The unpaired mode decides
  // the vacuum parity; a mismatch forces one occupied quasiparticle (the
  // cheapest one).
  const int iu = (grid == MomentumGrid::Integer) ? (n - 1) : ((n + 1) / 2 - 1);
  const bool vac_odd = d.eps[iu] < 0.0;
  const bool need_odd = (grid == MomentumGrid::Integer);
  d.penalized = (vac_odd != need_odd);
  d.flip_index = d.penalized ? imin : -1;
  d.ground_energy =
      static_cast<double>(-esum) + (d.penalized ? 2.0 * emin : 0.0);
  return d;
}

SectorChoice select_sector(const FfParams& p) {
  SectorChoice sc{dispersion(p, MomentumGrid::Integer),
                  dispersion(p, MomentumGrid::Half), MomentumGrid::Integer};
  sc.selected = (sc.integer_grid.ground_energy <= sc.half_grid.ground_energy)
                    ? MomentumGrid::Integer
                    : MomentumGrid::Half;
  return sc;
}

double FfTables::a_at(int r) const {
  const int idx = r + r_span + 1;
  if (idx < 0 || idx >= static_cast<int>(a.size()))
    throw UsageError("a_r requested outside the tabulated span");
  return a[idx];
}

FfTables ff_tables(const FfParams& p) {
  p.validate();
  Dispersion d;
  if (p.force_grid) {
    d = dispersion(p, *p.force_grid);
  } else {
    const SectorChoice sc = select_sector(p);
    d = (sc.selected == MomentumGrid::Integer) ? sc.integer_grid : sc.half_grid;
  }
  const int n = p.n_sites;
  FfTables t;
  t.n_sites = n;
  t.grid = d.grid;
  t.penalized = d.penalized;
  t.ground_energy = d.ground_energy;
  t.r_span = std::min(p.r_max, (n - 1) / 2);

  // Mode weights; the penalized sector flips the sign of its occupied mode.
  // At a gapless grid point the ratio eps/energy degrades to sign(eps).
  std::vector<double> weps(n), wg(n);
  for (int i = 0; i < n; ++i) {
    const double sgn = (d.penalized && i == d.flip_index) ? -1.0 : 1.0;
    if (d.energy[i] < 1e-14) {
      weps[i] = sgn * static_cast<double>((d.eps[i] > 0.0) - (d.eps[i] < 0.0));
      wg[i] = 0.0;
    } else {
      weps[i] = sgn * d.eps[i] / d.energy[i];
      wg[i] = sgn * p.gamma * std::sin(d.x[i]) / d.energy[i];
    }
  }

  long double msum = 0.0L;
  for (int i = 0; i < n; ++i) msum += weps[i];
  t.m = static_cast<double>(msum / n);

  // a_r = -(1/N) sum_k [cos(x_k r) w_eps + sin(x_k r) w_g]; negative r flips
  // the sine term. cos/sin(x_k r) advance by one-step angle-addition
  // recurrences, accumulating in extended precision.
  const int span1 = t.r_span + 1;
  t.a.assign(2 * span1 + 1, 0.0);
  std::vector<double> c(n, 1.0), s(n, 0.0), c1(n), s1(n);
  for (int i = 0; i < n; ++i) {
    c1[i] = std::cos(d.x[i]);
    s1[i] = std::sin(d.x[i]);
  }
  for (int r = 0; r <= span1; ++r) {
    long double ap = 0.0L, am = 0.0L;
    for (int i = 0; i < n; ++i) {
      const double ce = c[i] * weps[i];
      const double se = s[i] * wg[i];
      ap += ce + se;
      am += ce - se;
    }
    t.a[span1 + r] = static_cast<double>(-ap / n);
    t.a[span1 - r] = static_cast<double>(-am / n);
    if (r < span1) {
      for (int i = 0; i < n; ++i) {
        const double cn = c[i] * c1[i] - s[i] * s1[i];
        s[i] = s[i] * c1[i] + c[i] * s1[i];
        c[i] = cn;
      }
    }
  }
  return t;
}

double magnetization(const FfParams& p) {
  FfParams q = p;
  q.r_max = 1;
  return ff_tables(q).m;
}

namespace {

// Toeplitz determinant det[a_{i-j+off}] of order r via pivoted LU with
// log-magnitude accumulation: intermediate products cannot overflow, and a
// true underflow collapses to an honest zero.
double toeplitz_det(const FfTables& t, int r, int off) {
  Eigen::MatrixXd m(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) m(i, j) = t.a_at(i - j + off);
  if (r == 1) return m(0, 0);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  double sign = static_cast<double>(lu.permutationP().determinant());
  long double logmag = 0.0L;
  const auto diag = lu.matrixLU().diagonal();
  for (int i = 0; i < r; ++i) {
    const double dv = diag[i];
    if (dv == 0.0) return 0.0;
    logmag += std::log(std::abs(dv));
    if (dv < 0.0) sign = -sign;
  }
  const double res = sign * std::exp(static_cast<double>(logmag));
  if (!std::isfinite(res))
    throw NumericalError("correlator determinant overflowed");
  return res;
}

}  // namespace

PairCorrelators correlators(const FfTables& t, int r) {
  if (r < 1 || r > t.r_span)
    throw UsageError("correlator separation outside the tabulated span");
  PairCorrelators pc;
  pc.xx = toeplitz_det(t, r, -1);
  pc.yy = toeplitz_det(t, r, +1);
  pc.zz = t.m * t.m - t.a_at(r) * t.a_at(-r);
  const double worst =
      std::max({std::abs(pc.xx), std::abs(pc.yy), std::abs(pc.zz)});
  if (worst > 1.0 + 1e-9)
    throw NumericalError("pair correlator left [-1, 1] beyond tolerance");
  return pc;
}

XForm xform_ff(const FfTables& t, int r) {
  const PairCorrelators pc = correlators(t, r);
  XForm x;
  x.up = 0.25 * (1.0 + 2.0 * t.m + pc.zz);
  x.um = 0.25 * (1.0 - 2.0 * t.m + pc.zz);
  x.z = 0.25 * (1.0 - pc.zz);
  x.yp = 0.25 * (pc.xx + pc.yy);
  x.ym = 0.25 * (pc.xx - pc.yy);
  return x;
}

namespace {

Eigen::Matrix4cd xform_matrix(const XForm& x) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  rho(0, 0) = x.up;
  rho(1, 1) = x.z;
  rho(2, 2) = x.z;
  rho(3, 3) = x.um;
  rho(0, 3) = rho(3, 0) = x.ym;
  rho(1, 2) = rho(2, 1) = x.yp;
  return rho;
}

}  // namespace

Eigen::Matrix4cd rdm2_ff(const FfTables& t, int r) {
  const Eigen::Matrix4cd raw = xform_matrix(xform_ff(t, r));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(raw);
  Eigen::Vector4d w = es.eigenvalues();
  if (w.minCoeff() < -1e-8)
    throw NumericalError("free-fermion rdm2 not PSD within tolerance");
  for (int i = 0; i < 4; ++i) w[i] = std::max(w[i], 0.0);
  const double tr = w.sum();
  if (tr <= 0.0) throw NumericalError("free-fermion rdm2 has vanishing trace");
  w /= tr;
  return es.eigenvectors() * w.asDiagonal() *
         es.eigenvectors().adjoint();
}

double concurrence_xform(const XForm& x) {
  const double root = std::sqrt(std::max(0.0, x.up * x.um));
  const double c =
      2.0 * std::max({0.0, std::abs(x.yp) - root, std::abs(x.ym) - x.z});
  return std::min(c, 1.0);
}

double eof_xform(const XForm& x) {
  return eof_from_concurrence(concurrence_xform(x));
}

double e2v_xform(const XForm& x, double log_base) {
  const double half = (x.up - x.um) / 2.0;
  const double root = std::sqrt(half * half + x.ym * x.ym);
  const double mid = (x.up + x.um) / 2.0;
  return vn_entropy_from_eigs(
      {x.z + x.yp, x.z - x.yp, mid + root, mid - root}, log_base);
}

double discord_xform(const XForm& x, const DiscordConfig& cfg) {
  return quantum_discord(xform_matrix(x), cfg);
}

TauResult tau_sef_ff(const FfTables& t, const FfParams& p) {
  TauResult res;
  res.e1 = binary_entropy((1.0 + t.m) / 2.0);
  res.tau = res.e1 * res.e1;
  int below = 0;
  for (int r = 1; r <= t.r_span; ++r) {
    const double e = eof_xform(xform_ff(t, r));
    res.tau -= 2.0 * e * e;  // both ring directions at every separation
    res.r_stop = r;
    if (p.tail_tol > 0.0) {
      below = (e * e < p.tail_tol) ? below + 1 : 0;
      if (below >= 2) break;
    }
  }
  return res;
}

TauResult tau_sef_ff(const FfParams& p) {
  const FfTables t = ff_tables(p);
  return tau_sef_ff(t, p);
}

}  // namespace qpt
