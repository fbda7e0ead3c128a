#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qpt/errors.hpp"
#include "qpt/runconfig.hpp"
#include "qpt/scans.hpp"
#include "qpt/validate.hpp"

namespace {

// The config file is applied before flag parsing so that flags override its
// keys; the flag itself is re-registered below only so CLI11 accepts it.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return "";
}

void add_model_flags(CLI::App* sub, qpt::RunConfig& cfg) {
  sub->add_option("--model", cfg.model, "Model family: xxz, ssh, sshxy, xymi");
  sub->add_option("--engine", cfg.engine,
                  "Engine: ed (exact diagonalization) or ff (free fermion)");
  sub->add_option("--size", cfg.size, "Number of sites N");
  sub->add_option("--sector", cfg.sector,
                  "S_z sector: auto, full, or an n_up integer");
  sub->add_option("--delta", cfg.delta, "XXZ anisotropy");
  sub->add_option("--eta", cfg.eta, "SSH dimerization");
  sub->add_option("--gamma1", cfg.gamma1, "SSH-XY odd-bond anisotropy");
  sub->add_option("--gamma2", cfg.gamma2, "SSH-XY even-bond anisotropy");
  sub->add_option("--gamma", cfg.gamma, "XYMI anisotropy");
  sub->add_option("--lambda", cfg.lambda, "XYMI transverse field");
  sub->add_option("--alpha", cfg.alpha, "XYMI three-site coupling");
  sub->add_option("--beta", cfg.beta, "XYMI four-site coupling");
  sub->add_option("--force-grid", cfg.force_grid,
                  "Pin the free-fermion momentum grid: int or half");
}

void add_measure_flags(CLI::App* sub, qpt::RunConfig& cfg) {
  sub->add_option("--measures", cfg.measures,
                  "Measures: tau_sef, eof, e2v, qd, e1, energy, gap, mz, "
                  "levels (comma separated)")
      ->delimiter(',');
  sub->add_option("--pairs", cfg.pairs,
                  "Pair separations r for eof/e2v/qd (comma separated)")
      ->delimiter(',');
  sub->add_option("--anchor", cfg.anchor, "Anchor site (1-based)");
  sub->add_option("--k-levels", cfg.k_levels,
                  "Level count for the `levels` measure (1..8)");
  sub->add_option("--e2v-base", cfg.e2v_base,
                  "Log base for the pair von Neumann entropy: e or 2");
  sub->add_option("--r-max", cfg.r_max,
                  "Free-fermion pair-distance cutoff in tau");
  sub->add_option("--tail-tol", cfg.tail_tol,
                  "Free-fermion tau tail tolerance on the EOF^2 increment");
  sub->add_option("--qd-theta", cfg.qd_theta, "Discord coarse grid: theta");
  sub->add_option("--qd-phi", cfg.qd_phi, "Discord coarse grid: phi");
  sub->add_option("--qd-levels", cfg.qd_levels, "Discord refinement levels");
  sub->add_option("--qd-shrink", cfg.qd_shrink,
                  "Discord refinement shrink factor");
  sub->add_option("--qd-tol", cfg.qd_tol, "Discord refinement stop tolerance");
  sub->add_option("--qd-measured", cfg.qd_measured,
                  "Discord measured qubit: second or first");
}

void add_common_flags(CLI::App* sub, qpt::RunConfig& cfg,
                      std::string& config_path) {
  sub->add_option("--config", config_path,
                  "JSON config file; flags override its keys");
  sub->add_option("--tol", cfg.tol, "Eigensolver tolerance (0, 1e-6]");
  sub->add_option("--seed", cfg.seed, "Deterministic seed");
  sub->add_option("--workers", cfg.workers,
                  "Worker threads (0 = QPT_THREADS, else machine parallelism)");
  sub->add_option("--json-out", cfg.json_out, "JSON report path");
  sub->add_option("--plot", cfg.plot, "SVG plot path");
}

}  // namespace

int main(int argc, char** argv) {
  qpt::RunConfig cfg;
  try {
    const std::string path = find_config_path(argc, argv);
    if (!path.empty()) cfg = qpt::load_config_file(path);
  } catch (const qpt::UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  CLI::App app{
      "Quantum phase transition laboratory for spin-1/2 chains: residual "
      "multipartite entanglement and comparison detectors over exact "
      "diagonalization and free-fermion engines."};
  app.set_version_flag("--version", "qpt 1.0.0");
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file; flags override its keys");

  CLI::App* scan = app.add_subcommand(
      "scan", "Sweep one model parameter and record the measures as CSV");
  add_model_flags(scan, cfg);
  add_measure_flags(scan, cfg);
  add_common_flags(scan, cfg, config_path);
  scan->add_option("--param", cfg.param, "Parameter to sweep");
  scan->add_option("--range", cfg.range, "Sweep grid lo:hi:step");
  scan->add_option("--out", cfg.out, "Output CSV path")->required(false);

  CLI::App* fss = app.add_subcommand(
      "fss", "Finite-size scaling fit of a per-N extremum against 1/N^2");
  add_common_flags(fss, cfg, config_path);
  fss->add_option("--inputs", cfg.inputs,
                  "Input scan CSVs, one per size (comma separated)")
      ->delimiter(',');
  fss->add_option("--fss-measure", cfg.fss_measure,
                  "Column holding the feature to track");
  fss->add_option("--extremum", cfg.extremum, "Feature kind: min or max");

  CLI::App* pd = app.add_subcommand(
      "phasediag",
      "2-D map of d tau_sef/d param with ridge lines chained per column");
  add_model_flags(pd, cfg);
  add_measure_flags(pd, cfg);
  add_common_flags(pd, cfg, config_path);
  pd->add_option("--param", cfg.param, "Inner (derivative) parameter");
  pd->add_option("--range", cfg.range, "Inner grid lo:hi:step");
  pd->add_option("--x-param", cfg.x_param, "Outer parameter");
  pd->add_option("--x-range", cfg.x_range, "Outer grid lo:hi:step");
  pd->add_option("--out", cfg.out, "Output CSV path");

  CLI::App* val = app.add_subcommand(
      "validate",
      "Cross-check the free-fermion engine against exact diagonalization");
  add_common_flags(val, cfg, config_path);
  val->add_option("--sizes", cfg.val_sizes,
                  "Odd chain sizes to test (comma separated)")
      ->delimiter(',');
  val->add_option("--draws", cfg.draws, "Random parameter draws per size");
  val->add_option("--threshold", cfg.threshold, "Max allowed deviation");
  val->add_option("--force-grid", cfg.force_grid,
                  "Momentum grid: int, half, or wrong (flip the auto choice)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (scan->parsed()) {
      cfg.subcommand = "scan";
      return qpt::cmd_scan(cfg);
    }
    if (fss->parsed()) {
      cfg.subcommand = "fss";
      return qpt::cmd_fss(cfg);
    }
    if (pd->parsed()) {
      cfg.subcommand = "phasediag";
      return qpt::cmd_phasediag(cfg);
    }
    cfg.subcommand = "validate";
    return qpt::cmd_validate(cfg);
  } catch (const qpt::UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const qpt::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const qpt::NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
