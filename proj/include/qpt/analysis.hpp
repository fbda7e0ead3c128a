#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qpt/errors.hpp"

namespace qpt {

// Inclusive 1-D parameter grid parsed from "lo:hi:step".
struct Grid {
  double lo = 0.0, hi = 0.0, step = 0.0;
  std::size_t n = 1;

  double value(std::size_t i) const {
    return n == 1 ? lo : lo + static_cast<double>(i) * step;
  }
  std::vector<double> values() const;

  static Grid parse(const std::string& range);
  static Grid single(double x);
};

struct ScanRecord {
  double param = 0.0;
  std::vector<double> values;  // aligned with ScanTable::columns
  bool degenerate = false;
  std::string error;  // nonempty => values are NaN, scan continued
};

struct ScanTable {
  std::string param_name;
  std::vector<std::string> columns;
  std::vector<ScanRecord> rows;

  std::vector<double> xs() const;
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

struct PointResult {
  std::vector<double> values;
  bool degenerate = false;
};

using PointEvaluator = std::function<PointResult(double)>;
using FlushCallback = std::function<void(const ScanRecord&, std::size_t)>;

// Evaluate `eval` over the grid with `workers` threads. Completed records are
// handed to `on_flush` strictly in grid order as the finished prefix grows.
// A NumericalError at one point is recorded on its row (values NaN) and the
// scan continues; any other exception aborts.
ScanTable run_scan(const std::string& param_name, const Grid& grid,
                   const std::vector<std::string>& columns,
                   const PointEvaluator& eval, int workers = 1,
                   const FlushCallback& on_flush = {});

// Central differences with one-sided ends; NaNs propagate to the stencils
// that touch them.
std::vector<double> derivative(const std::vector<double>& xs,
                               const std::vector<double>& ys);

enum class ExtremumKind { Minimum, Maximum, Jump };

struct Extremum {
  double x = 0.0;
  // Parabolic-refined extremum value; for jumps, the signed step height.
  double value = 0.0;
  ExtremumKind kind = ExtremumKind::Minimum;
};

// Interior extrema (sign changes of the finite differences, refined by a
// parabola through the three bracketing samples) plus jump flags wherever a
// neighbor difference exceeds 10x the median absolute neighbor difference.
std::vector<Extremum> find_extrema(const std::vector<double>& xs,
                                   const std::vector<double>& ys);

struct FssResult {
  double slope = 0.0;
  double intercept = 0.0;  // extrapolated thermodynamic value
  double residual_rms = 0.0;
  std::vector<int> sizes;
  std::vector<double> values;
};

// Unweighted least squares of values against 1/N^2; needs >= 3 sizes.
FssResult finite_size_scaling(const std::vector<int>& sizes,
                              const std::vector<double>& values);

struct Ridge {
  // One chained feature line across columns: column coordinate, feature
  // location along the scanned axis, and the derivative value there.
  std::vector<double> xs, params, values;
};

struct RidgeOptions {
  double amplitude_fraction = 0.05;  // keep extrema >= frac * column max
  int max_jump_steps = 3;            // chaining reach, in row-grid steps
  double min_span_fraction = 0.0;    // drop chains spanning fewer columns
};

struct PhaseDiagram {
  std::vector<double> xs;      // column coordinates
  std::vector<double> params;  // row coordinates (scanned axis)
  std::vector<std::vector<double>> value;   // [col][row]
  std::vector<std::vector<double>> dvalue;  // [col][row], d/dparam
  std::vector<Ridge> ridges;
};

// Ridge extraction: per column take the derivative extrema above the
// amplitude filter, then chain nearest candidates across adjacent columns
// within the jump limit. Chains that miss a column terminate; unmatched
// extrema seed new chains.
PhaseDiagram phase_diagram(const std::vector<double>& xs,
                           const std::vector<double>& params,
                           const std::vector<std::vector<double>>& value,
                           const RidgeOptions& opts = {});

}  // namespace qpt
