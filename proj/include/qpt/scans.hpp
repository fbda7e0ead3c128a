#pragma once

#include <string>
#include <vector>

#include "qpt/analysis.hpp"
#include "qpt/runconfig.hpp"

namespace qpt {

// One output column of a scan.
struct MeasureItem {
  std::string column;
  std::string kind;  // tau | eof | e2v | qd | e1 | energy | gap | mz | level
  int r = 0;         // pair separation for eof/e2v/qd
  int level = 0;     // index for `level`
};

// Expand the configured measure tokens into concrete columns, in config
// order: tau_sef, eof, e2v, qd (each pair measure once per entry of
// `pairs`), e1, energy, gap, mz, levels. Duplicates and tokens the selected
// engine cannot provide are usage errors.
std::vector<MeasureItem> plan_measures(const RunConfig& cfg);

std::vector<std::string> column_names(const std::vector<MeasureItem>& plan);

// Thread-safe point evaluator for the configured engine. The scan parameter
// must name a coupling of the configured model (free-fermion: gamma, lambda,
// alpha, beta only).
PointEvaluator make_evaluator(const RunConfig& cfg,
                              const std::vector<MeasureItem>& plan);

// Set one of the model-coupling fields (delta, eta, gamma1, gamma2, gamma,
// lambda, alpha, beta) by name.
void set_config_param(RunConfig& cfg, const std::string& name, double value);

// Evaluate the configured scan in memory (no file output).
ScanTable scan_table(const RunConfig& cfg);

int cmd_scan(const RunConfig& cfg);
int cmd_fss(const RunConfig& cfg);
int cmd_phasediag(const RunConfig& cfg);

}  // namespace qpt
