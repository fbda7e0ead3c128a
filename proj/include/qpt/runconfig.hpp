#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpt/model.hpp"

namespace qpt {

// Effective configuration of one CLI invocation. Precedence: command-line
// flags override config-file keys override the defaults below. The full
// effective config is echoed into every output header (replay property).
struct RunConfig {
  std::string subcommand;  // scan | fss | phasediag | validate

  // Model and engine.
  std::string model = "xxz";
  std::string engine = "ed";  // ed | ff
  int size = 8;
  std::string sector = "auto";  // auto | full | <n_up integer>
  double delta = 1.0;
  double eta = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  // Scan axis and measure set.
  std::string param;
  std::string range;  // lo:hi:step
  std::vector<std::string> measures;
  std::vector<int> pairs{1};  // separations r for the pair measures
  int anchor = 1;
  int k_levels = 4;           // count for the `levels` measure
  std::string e2v_base = "e";  // e | 2
  int r_max = 50;
  double tail_tol = 1e-14;

  // Discord minimization.
  int qd_theta = 64;
  int qd_phi = 128;
  int qd_levels = 6;
  double qd_shrink = 5.0;
  double qd_tol = 1e-10;
  std::string qd_measured = "second";  // second | first

  // Solver and execution.
  double tol = 1e-10;
  std::uint64_t seed = 12345;
  int workers = 0;  // 0 = QPT_THREADS, else machine parallelism

  // Outputs.
  std::string out;
  std::string json_out;
  std::string plot;

  // fss inputs.
  std::vector<std::string> inputs;
  std::string fss_measure = "tau_sef";
  std::string extremum = "min";  // min | max

  // phasediag outer axis.
  std::string x_param;
  std::string x_range;

  // validate suite.
  std::vector<int> val_sizes{7, 9, 11};
  int draws = 20;
  double threshold = 1e-6;
  std::string force_grid;  // "" | int | half | wrong
};

// JSON round-trip with field-name keys. Unknown keys are usage errors so a
// typo cannot silently fall back to a default.
nlohmann::ordered_json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::ordered_json& j);
RunConfig load_config_file(const std::string& path);

// One-line JSON echo embedded in CSV headers and JSON reports.
std::string config_echo(const RunConfig& cfg);

// Worker count: positive --workers flag, else QPT_THREADS, else machine
// parallelism (at least 1).
int effective_workers(const RunConfig& cfg);

// Model parameters of this config as a ModelSpec (validated).
ModelSpec model_spec_from(const RunConfig& cfg);

// S_z sector selection for the ED engine: "full" = whole space; "auto" =
// n_up = N/2 for conserving families, full space otherwise; an integer
// selects that n_up directly.
std::optional<int> sector_for(const RunConfig& cfg, const ModelSpec& spec);

}  // namespace qpt
