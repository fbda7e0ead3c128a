#include "qpt/scans.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "qpt/csvio.hpp"
#include "qpt/eigensolver.hpp"
#include "qpt/freefermion.hpp"
#include "qpt/measures.hpp"
#include "qpt/rdm.hpp"
#include "qpt/svg.hpp"

namespace qpt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double e2v_base_value(const RunConfig& cfg) {
  if (cfg.e2v_base == "e") return std::exp(1.0);
  if (cfg.e2v_base == "2") return 2.0;
  throw UsageError("e2v_base must be 'e' or '2'");
}

DiscordConfig discord_config(const RunConfig& cfg) {
  DiscordConfig dc;
  dc.n_theta = cfg.qd_theta;
  dc.n_phi = cfg.qd_phi;
  dc.refine_levels = cfg.qd_levels;
  dc.shrink = cfg.qd_shrink;
  dc.tol = cfg.qd_tol;
  if (cfg.qd_measured == "first")
    dc.measure_first = true;
  else if (cfg.qd_measured != "second")
    throw UsageError("qd_measured must be 'second' or 'first'");
  dc.validate();
  return dc;
}

bool plan_has(const std::vector<MeasureItem>& plan, const std::string& kind) {
  for (const auto& it : plan)
    if (it.kind == kind) return true;
  return false;
}

std::optional<MomentumGrid> parse_force_grid(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "int") return MomentumGrid::Integer;
  if (s == "half") return MomentumGrid::Half;
  throw UsageError("force_grid must be '', 'int', or 'half' here");
}

PointEvaluator make_ed_evaluator(const RunConfig& cfg,
                                 const std::vector<MeasureItem>& plan) {
  const ModelSpec base = model_spec_from(cfg);
  const std::optional<int> sector = sector_for(cfg, base);
  {
    // Fail fast on a parameter name the model does not have.
    ModelSpec probe = base;
    probe.set_param(cfg.param, probe.get_param(cfg.param));
  }
  if (cfg.anchor < 1 || cfg.anchor > cfg.size)
    throw UsageError("anchor must lie in 1..N");
  for (const auto& it : plan)
    if ((it.kind == "eof" || it.kind == "e2v" || it.kind == "qd") &&
        (it.r < 1 || it.r >= cfg.size))
      throw UsageError("pair separation must lie in 1..N-1");
  const double base_log = e2v_base_value(cfg);
  const DiscordConfig dc =
      plan_has(plan, "qd") ? discord_config(cfg) : DiscordConfig{};
  const bool want_levels = plan_has(plan, "level");
  const bool want_full =
      plan_has(plan, "tau") || plan_has(plan, "eof") || plan_has(plan, "e2v") ||
      plan_has(plan, "qd") || plan_has(plan, "e1") || plan_has(plan, "mz");
  const std::string param = cfg.param;
  const int anchor = cfg.anchor;
  const int k_levels = cfg.k_levels;
  const double tol = cfg.tol;
  const std::uint64_t seed = cfg.seed;

  return [=, plan = plan](double x) -> PointResult {
    ModelSpec spec = base;
    spec.set_param(param, x);
    spec.validate();
    const SparseHamiltonian h = build_hamiltonian(spec, sector);
    std::vector<double> levels;
    if (want_levels) {
      const int k = static_cast<int>(
          std::min<std::size_t>(static_cast<std::size_t>(k_levels), h.dim()));
      levels = low_spectrum(h, k, tol, seed);
    }
    const GroundState gs = ground_state(h, tol, seed);
    FullState full;
    if (want_full) full = FullState::from(gs);

    std::map<int, Eigen::Matrix4cd> pair_rho;
    auto rho_at = [&](int r) -> const Eigen::Matrix4cd& {
      auto it = pair_rho.find(r);
      if (it == pair_rho.end()) {
        const int j = (anchor - 1 + r) % spec.n_sites + 1;
        it = pair_rho.emplace(r, rdm2(full, anchor, j)).first;
      }
      return it->second;
    };

    PointResult res;
    res.degenerate = gs.degenerate;
    res.values.reserve(plan.size());
    for (const auto& item : plan) {
      double v = kNaN;
      if (item.kind == "tau") {
        TauConfig tc;
        tc.anchor = anchor;
        v = tau_sef(full, tc);
      } else if (item.kind == "eof") {
        v = eof(rho_at(item.r));
      } else if (item.kind == "e2v") {
        v = vn_entropy(rho_at(item.r), base_log);
      } else if (item.kind == "qd") {
        v = quantum_discord(rho_at(item.r), dc);
      } else if (item.kind == "e1") {
        v = one_vs_rest_entropy(full, anchor);
      } else if (item.kind == "energy") {
        v = gs.energy;
      } else if (item.kind == "gap") {
        v = gs.gap;
      } else if (item.kind == "mz") {
        const Eigen::Matrix2cd r1 = rdm1(full, anchor);
        v = std::real(r1(0, 0)) - std::real(r1(1, 1));
      } else if (item.kind == "level") {
        v = item.level < static_cast<int>(levels.size())
                ? levels[item.level]
                : kNaN;
      }
      res.values.push_back(v);
    }
    return res;
  };
}

PointEvaluator make_ff_evaluator(const RunConfig& cfg,
                                 const std::vector<MeasureItem>& plan) {
  if (cfg.model != "xymi")
    throw UsageError("the free-fermion engine supports only the xymi model");
  FfParams base;
  base.n_sites = cfg.size;
  base.gamma = cfg.gamma;
  base.lambda = cfg.lambda;
  base.alpha = cfg.alpha;
  base.beta = cfg.beta;
  base.r_max = cfg.r_max;
  base.tail_tol = cfg.tail_tol;
  base.force_grid = parse_force_grid(cfg.force_grid);
  base.validate();
  if (cfg.param != "gamma" && cfg.param != "lambda" && cfg.param != "alpha" &&
      cfg.param != "beta")
    throw UsageError("the free-fermion engine cannot scan parameter '" +
                     cfg.param + "'");
  const int span = std::min(cfg.r_max, (cfg.size - 1) / 2);
  for (const auto& it : plan)
    if ((it.kind == "eof" || it.kind == "e2v" || it.kind == "qd") &&
        (it.r < 1 || it.r > span))
      throw UsageError(
          "pair separation exceeds the free-fermion table span (r_max)");
  const double base_log = e2v_base_value(cfg);
  const DiscordConfig dc =
      plan_has(plan, "qd") ? discord_config(cfg) : DiscordConfig{};
  const std::string param = cfg.param;

  return [=, plan = plan](double x) -> PointResult {
    FfParams p = base;
    if (param == "gamma")
      p.gamma = x;
    else if (param == "lambda")
      p.lambda = x;
    else if (param == "alpha")
      p.alpha = x;
    else
      p.beta = x;
    p.validate();
    const FfTables t = ff_tables(p);

    std::map<int, XForm> pair_x;
    auto x_at = [&](int r) -> const XForm& {
      auto it = pair_x.find(r);
      if (it == pair_x.end()) it = pair_x.emplace(r, xform_ff(t, r)).first;
      return it->second;
    };

    PointResult res;
    res.values.reserve(plan.size());
    for (const auto& item : plan) {
      double v = kNaN;
      if (item.kind == "tau") {
        v = tau_sef_ff(t, p).tau;
      } else if (item.kind == "eof") {
        v = eof_xform(x_at(item.r));
      } else if (item.kind == "e2v") {
        v = e2v_xform(x_at(item.r), base_log);
      } else if (item.kind == "qd") {
        v = discord_xform(x_at(item.r), dc);
      } else if (item.kind == "e1") {
        v = binary_entropy((1.0 + t.m) / 2.0);
      } else if (item.kind == "energy") {
        v = t.ground_energy;
      } else if (item.kind == "mz") {
        v = t.m;
      }
      res.values.push_back(v);
    }
    return res;
  };
}

void require(const bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

}  // namespace

std::vector<MeasureItem> plan_measures(const RunConfig& cfg) {
  require(cfg.engine == "ed" || cfg.engine == "ff",
          "engine must be 'ed' or 'ff'");
  require(!cfg.measures.empty(), "at least one measure is required");
  std::vector<MeasureItem> plan;
  auto add = [&](const std::string& column, const std::string& kind, int r,
                 int level) {
    for (const auto& it : plan)
      if (it.column == column)
        throw UsageError("duplicate output column '" + column + "'");
    plan.push_back({column, kind, r, level});
  };
  for (const auto& tok : cfg.measures) {
    if (tok == "tau_sef") {
      add("tau_sef", "tau", 0, 0);
    } else if (tok == "eof" || tok == "e2v" || tok == "qd") {
      require(!cfg.pairs.empty(), "measure '" + tok + "' needs --pairs");
      for (int r : cfg.pairs)
        add(tok + "_r" + std::to_string(r), tok, r, 0);
    } else if (tok == "e1" || tok == "one_vs_rest") {
      add("e1", "e1", 0, 0);
    } else if (tok == "energy") {
      add("energy", "energy", 0, 0);
    } else if (tok == "gap") {
      require(cfg.engine == "ed", "measure 'gap' needs the ed engine");
      add("gap", "gap", 0, 0);
    } else if (tok == "mz") {
      add("mz", "mz", 0, 0);
    } else if (tok == "levels") {
      require(cfg.engine == "ed", "measure 'levels' needs the ed engine");
      require(cfg.k_levels >= 1 && cfg.k_levels <= 8,
              "k_levels must lie in 1..8");
      for (int i = 0; i < cfg.k_levels; ++i)
        add("level_" + std::to_string(i), "level", 0, i);
    } else {
      throw UsageError("unknown measure '" + tok + "'");
    }
  }
  return plan;
}

std::vector<std::string> column_names(const std::vector<MeasureItem>& plan) {
  std::vector<std::string> names;
  names.reserve(plan.size());
  for (const auto& it : plan) names.push_back(it.column);
  return names;
}

PointEvaluator make_evaluator(const RunConfig& cfg,
                              const std::vector<MeasureItem>& plan) {
  return cfg.engine == "ff" ? make_ff_evaluator(cfg, plan)
                            : make_ed_evaluator(cfg, plan);
}

void set_config_param(RunConfig& cfg, const std::string& name, double value) {
  if (name == "delta")
    cfg.delta = value;
  else if (name == "eta")
    cfg.eta = value;
  else if (name == "gamma1")
    cfg.gamma1 = value;
  else if (name == "gamma2")
    cfg.gamma2 = value;
  else if (name == "gamma")
    cfg.gamma = value;
  else if (name == "lambda")
    cfg.lambda = value;
  else if (name == "alpha")
    cfg.alpha = value;
  else if (name == "beta")
    cfg.beta = value;
  else
    throw UsageError("unknown model parameter '" + name + "'");
}

ScanTable scan_table(const RunConfig& cfg) {
  require(!cfg.param.empty(), "param is required for a scan");
  require(!cfg.range.empty(), "range is required for a scan");
  const auto plan = plan_measures(cfg);
  const Grid grid = Grid::parse(cfg.range);
  return run_scan(cfg.param, grid, column_names(plan),
                  make_evaluator(cfg, plan), effective_workers(cfg));
}

int cmd_scan(const RunConfig& cfg) {
  require(!cfg.param.empty(), "--param is required");
  require(!cfg.range.empty(), "--range is required");
  require(!cfg.out.empty(), "--out is required");
  const auto plan = plan_measures(cfg);
  const auto columns = column_names(plan);
  const Grid grid = Grid::parse(cfg.range);
  const PointEvaluator eval = make_evaluator(cfg, plan);
  const bool degen_col = cfg.engine == "ed";

  CsvWriter writer(cfg.out, cfg.param, columns, config_echo(cfg), degen_col);
  const ScanTable table =
      run_scan(cfg.param, grid, columns, eval, effective_workers(cfg),
               [&](const ScanRecord& rec, std::size_t) { writer.write_row(rec); });
  writer.close();

  if (!cfg.json_out.empty()) {
    nlohmann::ordered_json j;
    j["command"] = "scan";
    j["config"] = to_json(cfg);
    j["rows"] = table.rows.size();
    auto& errs = j["errors"] = nlohmann::ordered_json::array();
    for (const auto& rec : table.rows)
      if (!rec.error.empty())
        errs.push_back({{"param", rec.param}, {"message", rec.error}});
    std::ofstream out(cfg.json_out, std::ios::trunc);
    if (!out) throw UsageError("cannot open '" + cfg.json_out + "'");
    out << j.dump(2) << "\n";
  }

  if (!cfg.plot.empty()) {
    std::vector<PlotSeries> series;
    const auto xs = table.xs();
    for (const auto& col : columns)
      series.push_back({col, xs, table.column(col)});
    PlotOptions popt;
    popt.title = cfg.model + " scan";
    popt.x_label = cfg.param;
    write_line_plot(cfg.plot, series, popt);
  }
  return 0;
}

int cmd_fss(const RunConfig& cfg) {
  if (cfg.inputs.size() < 3)
    throw UsageError(
        "insufficient data: finite-size scaling needs at least 3 input scans");
  ExtremumKind want;
  if (cfg.extremum == "min")
    want = ExtremumKind::Minimum;
  else if (cfg.extremum == "max")
    want = ExtremumKind::Maximum;
  else
    throw UsageError("extremum must be 'min' or 'max'");

  std::vector<int> sizes;
  std::vector<double> locations, values;
  for (const auto& path : cfg.inputs) {
    const CsvFile file = read_csv(path);
    if (file.config_json.empty())
      throw UsageError("input '" + path +
                       "' lacks the config echo needed to identify N");
    const RunConfig sub = config_from_json(
        nlohmann::ordered_json::parse(file.config_json));
    const ScanTable t = table_from_csv(file);
    const auto xs = t.xs();
    const auto ys = t.column(cfg.fss_measure);
    const Extremum* best = nullptr;
    std::vector<Extremum> exts = find_extrema(xs, ys);
    for (const Extremum& e : exts) {
      if (e.kind != want) continue;
      if (!best ||
          (want == ExtremumKind::Minimum ? e.value < best->value
                                         : e.value > best->value))
        best = &e;
    }
    if (!best)
      throw UsageError("no " + cfg.extremum + " of '" + cfg.fss_measure +
                       "' found in '" + path + "'");
    sizes.push_back(sub.size);
    locations.push_back(best->x);
    values.push_back(best->value);
  }

  const FssResult fit = finite_size_scaling(sizes, values);

  nlohmann::ordered_json j;
  j["command"] = "fss";
  j["measure"] = cfg.fss_measure;
  j["extremum"] = cfg.extremum;
  j["sizes"] = sizes;
  j["locations"] = locations;
  j["values"] = values;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["extrapolated"] = fit.intercept;
  j["residual_rms"] = fit.residual_rms;
  j["config"] = to_json(cfg);
  const std::string text = j.dump(2) + "\n";
  if (cfg.json_out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream out(cfg.json_out, std::ios::trunc);
    if (!out) throw UsageError("cannot open '" + cfg.json_out + "'");
    out << text;
  }

  if (!cfg.plot.empty()) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < sizes.size(); ++i)
      pts.emplace_back(1.0 / (static_cast<double>(sizes[i]) * sizes[i]),
                       values[i]);
    std::sort(pts.begin(), pts.end());
    PlotSeries data{"extrema", {}, {}};
    for (const auto& [x, y] : pts) {
      data.xs.push_back(x);
      data.ys.push_back(y);
    }
    PlotSeries line{"fit", {0.0, pts.back().first},
                    {fit.intercept, fit.intercept + fit.slope * pts.back().first}};
    PlotOptions popt;
    popt.title = "finite-size scaling of " + cfg.fss_measure;
    popt.x_label = "1/N^2";
    popt.y_label = cfg.fss_measure + " " + cfg.extremum;
    write_line_plot(cfg.plot, {line, data}, popt);
  }
  return 0;
}

int cmd_phasediag(const RunConfig& cfg) {
  require(!cfg.param.empty(), "--param is required");
  require(!cfg.range.empty(), "--range is required");
  require(!cfg.x_param.empty(), "--x-param is required");
  require(!cfg.x_range.empty(), "--x-range is required");
  require(!cfg.out.empty(), "--out is required");
  require(cfg.x_param != cfg.param,
          "--x-param and --param must differ");
  const Grid gx = Grid::parse(cfg.x_range);
  const Grid gy = Grid::parse(cfg.range);

  RunConfig base = cfg;
  base.measures = {"tau_sef"};
  set_config_param(base, cfg.x_param, gx.lo);  // validates the name
  const auto plan = plan_measures(base);
  const auto columns = column_names(plan);

  std::vector<std::vector<double>> tau(gx.n, std::vector<double>(gy.n, kNaN));
  std::vector<std::string> col_errors(gx.n);
  const int workers = effective_workers(cfg);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto column_task = [&] {
    while (true) {
      const std::size_t ix = next.fetch_add(1);
      if (ix >= gx.n) return;
      try {
        RunConfig colcfg = base;
        set_config_param(colcfg, cfg.x_param, gx.value(ix));
        const PointEvaluator eval = make_evaluator(colcfg, plan);
        for (std::size_t iy = 0; iy < gy.n; ++iy) {
          try {
            tau[ix][iy] = eval(gy.value(iy)).values.at(0);
          } catch (const NumericalError& e) {
            std::lock_guard<std::mutex> lk(mu);
            if (!col_errors[ix].empty()) col_errors[ix] += "; ";
            col_errors[ix] += e.what();
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1 || gx.n <= 1) {
    column_task();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(column_task);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  const PhaseDiagram pd =
      phase_diagram(gx.values(), gy.values(), tau, RidgeOptions{});

  const std::string dcol = "dtau_sef_d" + cfg.param;
  CsvWriter writer(cfg.out, cfg.x_param, {cfg.param, dcol}, config_echo(cfg),
                   false);
  for (std::size_t ix = 0; ix < gx.n; ++ix) {
    if (!col_errors[ix].empty())
      writer.write_comment("error " + cfg.x_param + "=" +
                           format_double(gx.value(ix)) + ": " +
                           col_errors[ix]);
    for (std::size_t iy = 0; iy < gy.n; ++iy) {
      ScanRecord rec;
      rec.param = gx.value(ix);
      rec.values = {gy.value(iy), pd.dvalue[ix][iy]};
      writer.write_row(rec);
    }
  }
  writer.close();

  if (!cfg.json_out.empty()) {
    nlohmann::ordered_json j;
    j["command"] = "phasediag";
    j["config"] = to_json(cfg);
    auto& ridges = j["ridges"] = nlohmann::ordered_json::array();
    for (const Ridge& r : pd.ridges)
      ridges.push_back({{"xs", r.xs}, {"params", r.params},
                        {"values", r.values}});
    std::ofstream out(cfg.json_out, std::ios::trunc);
    if (!out) throw UsageError("cannot open '" + cfg.json_out + "'");
    out << j.dump(2) << "\n";
  }

  if (!cfg.plot.empty()) {
    HeatmapOptions hopt;
    hopt.title = "d tau_sef / d " + cfg.param;
    hopt.x_label = cfg.x_param;
    hopt.y_label = cfg.param;
    write_heatmap(cfg.plot, gx.values(), gy.values(), pd.dvalue, pd.ridges,
                  hopt);
  }
  return 0;
}

}  // namespace qpt
