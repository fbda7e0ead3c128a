#pragma once

#include <string>
#include <vector>

#include "qpt/analysis.hpp"

namespace qpt {

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 900;
  int height = 560;
  // Vertical guide lines (e.g. detected critical points).
  std::vector<double> markers;
};

// Multi-series line plot as a self-contained SVG 1.1 document. NaN samples
// split a series into separate polyline segments.
void write_line_plot(const std::string& path,
                     const std::vector<PlotSeries>& series,
                     const PlotOptions& opts);

struct HeatmapOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 960;
  int height = 640;
};

// Heatmap of z[ix][iy] over (xs[ix], ys[iy]) with a diverging colormap
// centered on zero and ridge polylines overlaid.
void write_heatmap(const std::string& path, const std::vector<double>& xs,
                   const std::vector<double>& ys,
                   const std::vector<std::vector<double>>& z,
                   const std::vector<Ridge>& ridges,
                   const HeatmapOptions& opts);

}  // namespace qpt
