#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "qpt/measures.hpp"

namespace qpt {

// Momentum-grid parity sector: integer k or half-integer (k - 1/2) grid.
enum class MomentumGrid { Integer, Half };

// Analytic (quadratic-fermion) evaluation of the XYMI chain at large odd N.
struct FfParams {
  int n_sites = 1001;  // odd, >= 3
  double gamma = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  int r_max = 50;           // pair-distance cutoff in tau
  double tail_tol = 1e-14;  // stop once EOF^2 stays below this
  // Testing hook: pin the momentum grid instead of selecting by ground
  // energy. Leave empty for production use.
  std::optional<MomentumGrid> force_grid;

  void validate() const;
};

struct Dispersion {
  MomentumGrid grid;
  std::vector<double> x;       // momenta x_k = 2 pi k / N (k integer or half)
  std::vector<double> eps;     // pre-gap dispersion
  std::vector<double> energy;  // quasiparticle energies (nonnegative)
  double ground_energy = 0.0;  // parity-constrained sector ground energy
  bool penalized = false;      // parity forces one occupied quasiparticle
  int flip_index = -1;         // the occupied mode when penalized
};

Dispersion dispersion(const FfParams& p, MomentumGrid grid);

struct SectorChoice {
  Dispersion integer_grid;
  Dispersion half_grid;
  MomentumGrid selected;  // lower parity-constrained ground energy
};
SectorChoice select_sector(const FfParams& p);

// Magnetization and string coefficients a_r, r in [-r_span-1, r_span+1],
// evaluated on the selected (or forced) grid.
struct FfTables {
  int n_sites = 0;
  MomentumGrid grid = MomentumGrid::Integer;
  bool penalized = false;
  double ground_energy = 0.0;
  double m = 0.0;  // <sigma^z>
  int r_span = 0;
  std::vector<double> a;  // a[(r) + r_span + 1]

  double a_at(int r) const;
};
FfTables ff_tables(const FfParams& p);

double magnetization(const FfParams& p);

struct PairCorrelators {
  double xx = 0.0, yy = 0.0, zz = 0.0;
};
// Toeplitz-determinant pair correlators at separation r >= 1.
PairCorrelators correlators(const FfTables& t, int r);

// X-form parameters of the two-site RDM at separation r.
struct XForm {
  double up = 0.0, um = 0.0, z = 0.0, yp = 0.0, ym = 0.0;
};
XForm xform_ff(const FfTables& t, int r);

// Two-site RDM at separation r, PSD-projected: eigenvalues in [-1e-8, 0) are
// clipped to zero and the trace renormalized; anything lower raises a
// numerical-integrity error.
Eigen::Matrix4cd rdm2_ff(const FfTables& t, int r);

// Closed-form pair measures on an X-form state.
double concurrence_xform(const XForm& x);
double eof_xform(const XForm& x);  // bits
double e2v_xform(const XForm& x, double log_base);
double discord_xform(const XForm& x, const DiscordConfig& cfg = {});

struct TauResult {
  double tau = 0.0;
  double e1 = 0.0;  // one-vs-rest entropy (bits)
  int r_stop = 0;   // last separation included in the pair sum
};
TauResult tau_sef_ff(const FfTables& t, const FfParams& p);
TauResult tau_sef_ff(const FfParams& p);

}  // namespace qpt
