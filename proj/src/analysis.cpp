#include "qpt/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace qpt {

std::vector<double> Grid::values() const {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = value(i);
  return v;
}

Grid Grid::single(double x) {
  Grid g;
  g.lo = g.hi = x;
  g.step = 0.0;
  g.n = 1;
  return g;
}

Grid Grid::parse(const std::string& range) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : range) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3)
    throw UsageError("range must be lo:hi:step, got '" + range + "'");
  double v[3];
  for (int i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      v[i] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw UsageError("range field '" + parts[i] + "' is not a number");
    }
  }
  if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2]))
    throw UsageError("range endpoints and step must be finite");
  Grid g;
  g.lo = v[0];
  g.hi = v[1];
  g.step = v[2];
  if (g.lo == g.hi) {
    g.n = 1;
    return g;
  }
  if (!(g.step > 0.0)) throw UsageError("range step must be positive");
  if (g.hi < g.lo) throw UsageError("range upper bound below lower bound");
  const double span = (g.hi - g.lo) / g.step;
  const auto k = static_cast<long long>(std::llround(span));
  if (k >= 1 && std::abs(g.lo + static_cast<double>(k) * g.step - g.hi) <=
                    1e-6 * g.step) {
    g.n = static_cast<std::size_t>(k) + 1;  // step divides the span
  } else {
    g.n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  }
  return g;
}

std::vector<double> ScanTable::xs() const {
  std::vector<double> v(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i].param;
  return v;
}

std::size_t ScanTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw UsageError("no column named '" + name + "'");
}

std::vector<double> ScanTable::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> v(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    v[i] = c < rows[i].values.size()
               ? rows[i].values[c]
               : std::numeric_limits<double>::quiet_NaN();
  return v;
}

ScanTable run_scan(const std::string& param_name, const Grid& grid,
                   const std::vector<std::string>& columns,
                   const PointEvaluator& eval, int workers,
                   const FlushCallback& on_flush) {
  ScanTable table;
  table.param_name = param_name;
  table.columns = columns;
  table.rows.resize(grid.n);

  auto evaluate_one = [&](std::size_t i) {
    ScanRecord rec;
    rec.param = grid.value(i);
    try {
      PointResult pr = eval(rec.param);
      if (pr.values.size() != columns.size())
        throw UsageError("evaluator returned a mismatched value count");
      rec.values = std::move(pr.values);
      rec.degenerate = pr.degenerate;
    } catch (const NumericalError& e) {
      rec.error = e.what();
      rec.values.assign(columns.size(),
                        std::numeric_limits<double>::quiet_NaN());
    }
    return rec;
  };

  const int nw = std::max(1, workers);
  if (nw == 1 || grid.n <= 1) {
    for (std::size_t i = 0; i < grid.n; ++i) {
      table.rows[i] = evaluate_one(i);
      if (on_flush) on_flush(table.rows[i], i);
    }
    return table;
  }

  std::mutex mu;
  std::vector<char> done(grid.n, 0);
  std::size_t flushed = 0;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.n) return;
      ScanRecord rec;
      try {
        rec = evaluate_one(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
      std::lock_guard<std::mutex> lk(mu);
      table.rows[i] = std::move(rec);
      done[i] = 1;
      while (flushed < grid.n && done[flushed]) {
        if (on_flush) on_flush(table.rows[flushed], flushed);
        ++flushed;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return table;
}

std::vector<double> derivative(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw UsageError("derivative: length mismatch");
  if (n < 3) throw UsageError("derivative needs at least three points");
  std::vector<double> d(n);
  d[0] = (ys[1] - ys[0]) / (xs[1] - xs[0]);
  d[n - 1] = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = (ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1]);
  // A point whose own value is error-marked has no trustworthy derivative,
  // even though the central stencil skips it.
  for (std::size_t i = 0; i < n; ++i)
    if (std::isnan(ys[i])) d[i] = std::numeric_limits<double>::quiet_NaN();
  return d;
}

std::vector<Extremum> find_extrema(const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw UsageError("find_extrema: length mismatch");
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dl = ys[i] - ys[i - 1];
    const double dr = ys[i + 1] - ys[i];
    if (std::isnan(dl) || std::isnan(dr)) continue;
    if (dl * dr < 0.0) {
      Extremum e;
      e.kind = dl > 0.0 ? ExtremumKind::Maximum : ExtremumKind::Minimum;
      e.x = xs[i];
      e.value = ys[i];
      const double d2 = ys[i + 1] - 2.0 * ys[i] + ys[i - 1];
      if (std::abs(d2) > 1e-300) {
        const double h = (xs[i + 1] - xs[i - 1]) / 2.0;
        const double slope = ys[i + 1] - ys[i - 1];
        e.x = xs[i] - 0.5 * h * slope / d2;
        e.value = ys[i] - slope * slope / (8.0 * d2);
      }
      out.push_back(e);
    }
  }
  // Jump flags: neighbor differences an order of magnitude beyond typical.
  std::vector<double> mags;
  mags.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = ys[i + 1] - ys[i];
    if (!std::isnan(d)) mags.push_back(std::abs(d));
  }
  if (mags.size() >= 2) {
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median = (m % 2 == 1)
                              ? sorted[m / 2]
                              : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double d = ys[i + 1] - ys[i];
      if (std::isnan(d)) continue;
      if (std::abs(d) > 10.0 * median) {
        Extremum e;
        e.kind = ExtremumKind::Jump;
        e.x = 0.5 * (xs[i] + xs[i + 1]);
        e.value = d;
        out.push_back(e);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Extremum& a, const Extremum& b) { return a.x < b.x; });
  return out;
}

FssResult finite_size_scaling(const std::vector<int>& sizes,
                              const std::vector<double>& values) {
  if (sizes.size() != values.size())
    throw UsageError("finite_size_scaling: length mismatch");
  if (sizes.size() < 3)
    throw UsageError("insufficient data: finite-size scaling needs >= 3 sizes");
  FssResult r;
  r.sizes = sizes;
  r.values = values;
  const std::size_t n = sizes.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 1.0 / (static_cast<double>(sizes[i]) * sizes[i]);
    sx += x;
    sy += values[i];
    sxx += x * x;
    sxy += x * values[i];
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300)
    throw UsageError("finite_size_scaling: degenerate size set");
  r.slope = (n * sxy - sx * sy) / den;
  r.intercept = (sy - r.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 1.0 / (static_cast<double>(sizes[i]) * sizes[i]);
    const double e = values[i] - (r.intercept + r.slope * x);
    ss += e * e;
  }
  r.residual_rms = std::sqrt(ss / n);
  return r;
}

PhaseDiagram phase_diagram(const std::vector<double>& xs,
                           const std::vector<double>& params,
                           const std::vector<std::vector<double>>& value,
                           const RidgeOptions& opts) {
  if (value.size() != xs.size())
    throw UsageError("phase_diagram: column count mismatch");
  for (const auto& col : value)
    if (col.size() != params.size())
      throw UsageError("phase_diagram: row count mismatch");
  PhaseDiagram pd;
  pd.xs = xs;
  pd.params = params;
  pd.value = value;
  pd.dvalue.resize(xs.size());

  const double step = params.size() >= 2 ? params[1] - params[0] : 1.0;

  // Per-column extrema of the derivative, amplitude-filtered.
  std::vector<std::vector<std::pair<double, double>>> col_ext(xs.size());
  for (std::size_t c = 0; c < xs.size(); ++c) {
    if (params.size() < 2) {
      pd.dvalue[c].assign(params.size(),
                          std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    pd.dvalue[c] = derivative(params, value[c]);
    std::vector<std::pair<double, double>> keep;
    double vmax = 0.0;
    std::vector<std::pair<double, double>> all;
    for (const Extremum& e : find_extrema(params, pd.dvalue[c])) {
      if (e.kind == ExtremumKind::Jump) continue;
      all.emplace_back(e.x, e.value);
      vmax = std::max(vmax, std::abs(e.value));
    }
    for (const auto& [x, v] : all)
      if (std::abs(v) >= opts.amplitude_fraction * vmax) keep.emplace_back(x, v);
    std::sort(keep.begin(), keep.end());
    col_ext[c] = std::move(keep);
  }

  // Greedy nearest-neighbor chaining across adjacent columns. Only chains
  // extended at the previous column can continue; each chain takes at most
  // one extremum per column and each extremum joins at most one chain.
  struct Chain {
    std::vector<double> cx, cp, cv;
  };
  std::vector<Chain> chains;
  std::vector<std::size_t> prev;  // chains extended at the previous column
  for (std::size_t c = 0; c < xs.size(); ++c) {
    const auto& exts = col_ext[c];
    std::vector<std::tuple<double, std::size_t, std::size_t>> cand;
    for (std::size_t ch : prev) {
      const double last = chains[ch].cp.back();
      for (std::size_t e = 0; e < exts.size(); ++e) {
        const double d = std::abs(exts[e].first - last);
        if (d <= opts.max_jump_steps * step + 1e-12) cand.emplace_back(d, ch, e);
      }
    }
    std::sort(cand.begin(), cand.end());
    std::vector<char> ext_used(exts.size(), 0);
    std::vector<std::size_t> now;
    std::vector<char> chain_taken(chains.size(), 0);
    for (const auto& [d, ch, e] : cand) {
      (void)d;
      if (chain_taken[ch] || ext_used[e]) continue;
      chain_taken[ch] = 1;
      ext_used[e] = 1;
      chains[ch].cx.push_back(xs[c]);
      chains[ch].cp.push_back(exts[e].first);
      chains[ch].cv.push_back(exts[e].second);
      now.push_back(ch);
    }
    for (std::size_t e = 0; e < exts.size(); ++e) {
      if (ext_used[e]) continue;
      Chain nc;
      nc.cx.push_back(xs[c]);
      nc.cp.push_back(exts[e].first);
      nc.cv.push_back(exts[e].second);
      chains.push_back(std::move(nc));
      now.push_back(chains.size() - 1);
    }
    prev = std::move(now);
  }

  const std::size_t min_cols = static_cast<std::size_t>(
      std::ceil(opts.min_span_fraction * static_cast<double>(xs.size())));
  for (const Chain& ch : chains) {
    if (ch.cx.size() < std::max<std::size_t>(1, min_cols)) continue;
    Ridge r;
    r.xs = ch.cx;
    r.params = ch.cp;
    r.values = ch.cv;
    pd.ridges.push_back(std::move(r));
  }
  return pd;
}

}  // namespace qpt
