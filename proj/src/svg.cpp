#include "qpt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "qpt/errors.hpp"

namespace qpt {
namespace {

struct Range {
  double lo = 0.0, hi = 1.0;
};

Range data_range(const std::vector<double>& v, Range acc) {
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    acc.lo = std::min(acc.lo, x);
    acc.hi = std::max(acc.hi, x);
  }
  return acc;
}

Range pad_range(Range r) {
  if (!(r.lo <= r.hi)) return {0.0, 1.0};
  double span = r.hi - r.lo;
  if (span <= 0.0) span = std::max(1.0, std::abs(r.lo));
  return {r.lo - 0.05 * span, r.hi + 0.05 * span};
}

// Tick spacing from the 1-2-5 progression closest to span/target.
double nice_step(double span, int target) {
  const double raw = span / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double s = 10.0;
  if (norm < 1.5)
    s = 1.0;
  else if (norm < 3.5)
    s = 2.0;
  else if (norm < 7.5)
    s = 5.0;
  return s * mag;
}

std::vector<double> ticks(Range r, int target) {
  const double step = nice_step(r.hi - r.lo, target);
  std::vector<double> t;
  double v = std::ceil(r.lo / step) * step;
  for (; v <= r.hi + 0.5 * step; v += step) {
    const double snapped = std::abs(v) < 1e-12 * step ? 0.0 : v;
    t.push_back(snapped);
    if (t.size() > 40) break;
  }
  return t;
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string diverging_color(double t) {
  // t in [-1, 1]: blue -> white -> red.
  t = std::clamp(t, -1.0, 1.0);
  auto lerp = [](int a, int b, double u) {
    return static_cast<int>(std::lround(a + (b - a) * u));
  };
  int r, g, b;
  if (t < 0) {
    const double u = t + 1.0;  // 0 at deep blue, 1 at white
    r = lerp(33, 247, u);
    g = lerp(102, 247, u);
    b = lerp(172, 247, u);
  } else {
    const double u = t;  // 0 at white, 1 at deep red
    r = lerp(247, 178, u);
    g = lerp(247, 24, u);
    b = lerp(247, 43, u);
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::ofstream open_svg(const std::string& path, int w, int h) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw UsageError("cannot open plot file '" + path + "'");
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
      << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h
      << "\" fill=\"#ffffff\"/>\n";
  return out;
}

}  // namespace

void write_line_plot(const std::string& path,
                     const std::vector<PlotSeries>& series,
                     const PlotOptions& opts) {
  const int W = opts.width, H = opts.height;
  const double ml = 74, mr = 24, mt = 46, mb = 56;
  const double pw = W - ml - mr, ph = H - mt - mb;

  Range xr{std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  Range yr = xr;
  for (const auto& s : series) {
    xr = data_range(s.xs, xr);
    yr = data_range(s.ys, yr);
  }
  xr = pad_range(xr);
  yr = pad_range(yr);

  auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) {
    return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  std::ofstream out = open_svg(path, W, H);
  out << "<g font-family=\"Helvetica,Arial,sans-serif\" font-size=\"13\">\n";

  for (double tx : ticks(xr, 7)) {
    out << "<line x1=\"" << num(px(tx)) << "\" y1=\"" << num(mt) << "\" x2=\""
        << num(px(tx)) << "\" y2=\"" << num(mt + ph)
        << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << num(px(tx)) << "\" y=\"" << num(mt + ph + 18)
        << "\" text-anchor=\"middle\">" << num(tx) << "</text>\n";
  }
  for (double ty : ticks(yr, 6)) {
    out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(py(ty)) << "\" x2=\""
        << num(ml + pw) << "\" y2=\"" << num(py(ty))
        << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(ty) + 4)
        << "\" text-anchor=\"end\">" << num(ty) << "</text>\n";
  }
  out << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\""
      << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  for (double m : opts.markers) {
    if (m < xr.lo || m > xr.hi) continue;
    out << "<line x1=\"" << num(px(m)) << "\" y1=\"" << num(mt) << "\" x2=\""
        << num(px(m)) << "\" y2=\"" << num(mt + ph)
        << "\" stroke=\"#888888\" stroke-dasharray=\"5,4\"/>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    std::string pts;
    auto flush_segment = [&] {
      if (!pts.empty())
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.6\" points=\"" << pts << "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < series[s].xs.size(); ++i) {
      const double x = series[s].xs[i], y = series[s].ys[i];
      if (!std::isfinite(x) || !std::isfinite(y)) {
        flush_segment();
        continue;
      }
      pts += num(px(x)) + "," + num(py(y)) + " ";
    }
    flush_segment();
  }

  double ly = mt + 16;
  for (std::size_t s = 0; s < series.size(); ++s) {
    if (series[s].label.empty()) continue;
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    out << "<line x1=\"" << num(ml + pw - 150) << "\" y1=\"" << num(ly - 4)
        << "\" x2=\"" << num(ml + pw - 126) << "\" y2=\"" << num(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(ml + pw - 120) << "\" y=\"" << num(ly) << "\">"
        << xml_escape(series[s].label) << "</text>\n";
    ly += 18;
  }

  if (!opts.title.empty())
    out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(mt - 14)
        << "\" text-anchor=\"middle\" font-size=\"16\">"
        << xml_escape(opts.title) << "</text>\n";
  if (!opts.x_label.empty())
    out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(H - 14)
        << "\" text-anchor=\"middle\">" << xml_escape(opts.x_label)
        << "</text>\n";
  if (!opts.y_label.empty())
    out << "<text x=\"18\" y=\"" << num(mt + ph / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num(mt + ph / 2) << ")\">" << xml_escape(opts.y_label)
        << "</text>\n";

  out << "</g>\n</svg>\n";
  out.flush();
  if (!out) throw UsageError("failed writing plot '" + path + "'");
}

void write_heatmap(const std::string& path, const std::vector<double>& xs,
                   const std::vector<double>& ys,
                   const std::vector<std::vector<double>>& z,
                   const std::vector<Ridge>& ridges,
                   const HeatmapOptions& opts) {
  if (xs.empty() || ys.empty() || z.size() != xs.size())
    throw UsageError("heatmap dimensions do not match");
  const int W = opts.width, H = opts.height;
  const double ml = 74, mr = 88, mt = 46, mb = 56;
  const double pw = W - ml - mr, ph = H - mt - mb;

  Range xr{xs.front(), xs.back()};
  Range yr{ys.front(), ys.back()};
  const double dx = xs.size() > 1 ? (xr.hi - xr.lo) / (xs.size() - 1) : 1.0;
  const double dy = ys.size() > 1 ? (yr.hi - yr.lo) / (ys.size() - 1) : 1.0;
  xr.lo -= dx / 2;
  xr.hi += dx / 2;
  yr.lo -= dy / 2;
  yr.hi += dy / 2;

  auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) {
    return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  double vmax = 0.0;
  for (const auto& col : z)
    for (double v : col)
      if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) vmax = 1.0;

  std::ofstream out = open_svg(path, W, H);
  out << "<g font-family=\"Helvetica,Arial,sans-serif\" font-size=\"13\">\n";

  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (z[i].size() != ys.size())
      throw UsageError("heatmap dimensions do not match");
    const double x0 = px(xs[i] - dx / 2), x1 = px(xs[i] + dx / 2);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double v = z[i][j];
      const std::string fill =
          std::isfinite(v) ? diverging_color(v / vmax) : std::string("#bbbbbb");
      const double y0 = py(ys[j] + dy / 2), y1 = py(ys[j] - dy / 2);
      out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\""
          << num(x1 - x0 + 0.5) << "\" height=\"" << num(y1 - y0 + 0.5)
          << "\" fill=\"" << fill << "\"/>\n";
    }
  }

  for (const Ridge& r : ridges) {
    std::string pts;
    for (std::size_t i = 0; i < r.xs.size(); ++i)
      pts += num(px(r.xs[i])) + "," + num(py(r.params[i])) + " ";
    out << "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"2\" "
           "points=\""
        << pts << "\"/>\n";
  }

  out << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\""
      << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  for (double tx : ticks(xr, 7))
    out << "<text x=\"" << num(px(tx)) << "\" y=\"" << num(mt + ph + 18)
        << "\" text-anchor=\"middle\">" << num(tx) << "</text>\n";
  for (double ty : ticks(yr, 6))
    out << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(ty) + 4)
        << "\" text-anchor=\"end\">" << num(ty) << "</text>\n";

  // Colorbar.
  const double cbx = W - mr + 22, cbw = 16;
  const int cbn = 64;
  for (int i = 0; i < cbn; ++i) {
    const double t = 1.0 - 2.0 * i / (cbn - 1);
    const double y0 = mt + ph * i / cbn;
    out << "<rect x=\"" << num(cbx) << "\" y=\"" << num(y0) << "\" width=\""
        << num(cbw) << "\" height=\"" << num(ph / cbn + 0.5) << "\" fill=\""
        << diverging_color(t) << "\"/>\n";
  }
  out << "<rect x=\"" << num(cbx) << "\" y=\"" << num(mt) << "\" width=\""
      << num(cbw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  out << "<text x=\"" << num(cbx + cbw + 4) << "\" y=\"" << num(mt + 8)
      << "\">" << num(vmax) << "</text>\n";
  out << "<text x=\"" << num(cbx + cbw + 4) << "\" y=\"" << num(mt + ph / 2 + 4)
      << "\">0</text>\n";
  out << "<text x=\"" << num(cbx + cbw + 4) << "\" y=\"" << num(mt + ph)
      << "\">" << num(-vmax) << "</text>\n";

  if (!opts.title.empty())
    out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(mt - 14)
        << "\" text-anchor=\"middle\" font-size=\"16\">"
        << xml_escape(opts.title) << "</text>\n";
  if (!opts.x_label.empty())
    out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(H - 14)
        << "\" text-anchor=\"middle\">" << xml_escape(opts.x_label)
        << "</text>\n";
  if (!opts.y_label.empty())
    out << "<text x=\"18\" y=\"" << num(mt + ph / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num(mt + ph / 2) << ")\">" << xml_escape(opts.y_label)
        << "</text>\n";

  out << "</g>\n</svg>\n";
  out.flush();
  if (!out) throw UsageError("failed writing plot '" + path + "'");
}

}  // namespace qpt
