#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <thread>

#include "qpt/analysis.hpp"

using namespace qpt;

TEST_CASE("grid parsing covers the documented forms") {
  const Grid g = Grid::parse("-1.5:2.0:0.01");
  CHECK(g.n == 351);
  CHECK(g.value(0) == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(g.value(350) == doctest::Approx(2.0).epsilon(1e-12));

  // Endpoint short of a full step: truncate.
  const Grid t = Grid::parse("0:0.95:0.2");
  CHECK(t.n == 5);
  CHECK(t.value(4) == doctest::Approx(0.8).epsilon(1e-12));

  // Endpoint within rounding slack of a grid node still lands on it.
  const Grid s = Grid::parse("0:0.3:0.1");
  CHECK(s.n == 4);

  // Degenerate single-point grid.
  const Grid one = Grid::parse("1.25:1.25:0.5");
  CHECK(one.n == 1);
  CHECK(one.value(0) == 1.25);
  const Grid single = Grid::single(0.7);
  CHECK(single.n == 1);
  CHECK(single.value(0) == 0.7);

  CHECK_THROWS_AS((void)Grid::parse("1:0:0.1"), UsageError);
  CHECK_THROWS_AS((void)Grid::parse("0:1:0"), UsageError);
  CHECK_THROWS_AS((void)Grid::parse("0:1:-0.1"), UsageError);
  CHECK_THROWS_AS((void)Grid::parse("0:1"), UsageError);
  CHECK_THROWS_AS((void)Grid::parse("a:b:c"), UsageError);
  CHECK_THROWS_AS((void)Grid::parse(""), UsageError);

  const auto vals = Grid::parse("2:4:0.5").values();
  REQUIRE(vals.size() == 5);
  CHECK(vals.front() == 2.0);
  CHECK(vals.back() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("scan evaluation preserves grid order and contains point failures") {
  const Grid g = Grid::parse("0:1:0.1");
  std::vector<std::string> cols{"f", "g"};
  auto eval = [](double x) {
    if (x > 0.45 && x < 0.55)
      throw NumericalError("synthetic failure");
    PointResult r;
    r.values = {x * x, -x};
    r.degenerate = x > 0.85;
    return r;
  };

  std::vector<double> flushed_params;
  const ScanTable tab =
      run_scan("x", g, cols, eval, 1, [&](const ScanRecord& r, std::size_t i) {
        CHECK(i == flushed_params.size());
        flushed_params.push_back(r.param);
      });

  REQUIRE(tab.rows.size() == 11);
  REQUIRE(flushed_params.size() == 11);
  for (std::size_t i = 0; i < 11; ++i)
    CHECK(flushed_params[i] == doctest::Approx(tab.rows[i].param).epsilon(1e-15));
  const auto& bad = tab.rows[5];
  CHECK(bad.error == "synthetic failure");
  CHECK(std::isnan(bad.values[0]));
  CHECK(std::isnan(bad.values[1]));
  CHECK(tab.rows[4].error.empty());
  CHECK(tab.rows[9].degenerate);
  CHECK(!tab.rows[2].degenerate);
  CHECK(tab.column("f")[3] == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(tab.column_index("g") == 1);
  CHECK_THROWS_AS((void)tab.column_index("h"), UsageError);

  // Unrecognized exceptions abort the scan.
  auto boom = [](double) -> PointResult { throw std::logic_error("bug"); };
  CHECK_THROWS_AS((void)run_scan("x", g, {"f"}, boom, 1), std::logic_error);
}

TEST_CASE("parallel scans match sequential scans exactly") {
  const Grid g = Grid::parse("0:3:0.05");
  auto eval = [](double x) {
    PointResult r;
    r.values = {std::sin(3 * x) * std::exp(-x), std::cos(x)};
    if (x > 1.4 && x < 1.45) throw NumericalError("hole");
    return r;
  };
  const ScanTable seq = run_scan("x", g, {"a", "b"}, eval, 1);
  const ScanTable par = run_scan("x", g, {"a", "b"}, eval, 4);
  REQUIRE(seq.rows.size() == par.rows.size());
  for (std::size_t i = 0; i < seq.rows.size(); ++i) {
    CHECK(seq.rows[i].param == par.rows[i].param);
    CHECK(seq.rows[i].error == par.rows[i].error);
    for (std::size_t c = 0; c < 2; ++c) {
      const double a = seq.rows[i].values[c], b = par.rows[i].values[c];
      if (std::isnan(a))
        CHECK(std::isnan(b));
      else
        CHECK(a == b);
    }
  }
  // Flush arrives in grid order even when workers finish out of order.
  std::atomic<int> count{0};
  run_scan("x", g, {"a", "b"}, eval, 4, [&](const ScanRecord&, std::size_t i) {
    CHECK(static_cast<int>(i) == count.fetch_add(1));
  });
  CHECK(count.load() == static_cast<int>(g.n));
}

TEST_CASE("finite differences are exact on quadratics and accurate on sine") {
  // Central and one-sided stencils reproduce a quadratic's derivative
  // exactly (up to roundoff).
  std::vector<double> xs, ys;
  for (int i = 0; i <= 20; ++i) {
    const double x = -1.0 + 0.1 * i;
    xs.push_back(x);
    ys.push_back(2.5 * x * x - 1.25 * x + 0.3);
  }
  const auto d = derivative(xs, ys);
  REQUIRE(d.size() == xs.size());
  for (std::size_t i = 1; i + 1 < xs.size(); ++i)
    CHECK(d[i] == doctest::Approx(5.0 * xs[i] - 1.25).epsilon(1e-10));
  // Ends fall back to plain one-sided differences.
  CHECK(d.front() ==
        doctest::Approx((ys[1] - ys[0]) / (xs[1] - xs[0])).epsilon(1e-14));
  CHECK(d.back() == doctest::Approx((ys[20] - ys[19]) / (xs[20] - xs[19]))
                        .epsilon(1e-14));

  // Second-order accuracy on a smooth function.
  std::vector<double> sx, sy;
  for (int i = 0; i <= 1000; ++i) {
    const double x = 0.001 * i * 3.14159265358979323846;
    sx.push_back(x);
    sy.push_back(std::sin(x));
  }
  const auto sd = derivative(sx, sy);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < sx.size(); ++i)
    worst = std::max(worst, std::abs(sd[i] - std::cos(sx[i])));
  CHECK(worst < 2e-5);

  // NaNs poison exactly the stencils that touch them.
  std::vector<double> ny = ys;
  ny[10] = std::numeric_limits<double>::quiet_NaN();
  const auto nd = derivative(xs, ny);
  CHECK(std::isnan(nd[9]));
  CHECK(std::isnan(nd[10]));
  CHECK(std::isnan(nd[11]));
  CHECK(!std::isnan(nd[8]));
  CHECK(!std::isnan(nd[12]));

  CHECK_THROWS_AS((void)derivative({0.0}, {1.0}), UsageError);
  CHECK_THROWS_AS((void)derivative({0.0, 1.0}, {1.0}), UsageError);
  CHECK_THROWS_AS((void)derivative({0.0, 1.0}, {1.0, 2.0}), UsageError);
}

TEST_CASE("extremum refinement recovers a parabola vertex to high precision") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 40; ++i) {
    const double x = -1.0 + 0.05 * i;
    xs.push_back(x);
    ys.push_back(3.0 * (x - 0.4262) * (x - 0.4262) + 0.77);
  }
  const auto ex = find_extrema(xs, ys);
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].kind == ExtremumKind::Minimum);
  CHECK(std::abs(ex[0].x - 0.4262) < 1e-10);
  CHECK(std::abs(ex[0].value - 0.77) < 1e-10);
}

TEST_CASE("extrema of a smooth wave are located and classified") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 600; ++i) {
    const double x = 0.01 * i;
    xs.push_back(x);
    ys.push_back(std::sin(x));
  }
  const auto ex = find_extrema(xs, ys);
  REQUIRE(ex.size() == 2);
  CHECK(ex[0].kind == ExtremumKind::Maximum);
  CHECK(std::abs(ex[0].x - std::acos(-1.0) / 2) < 1e-4);
  CHECK(std::abs(ex[0].value - 1.0) < 1e-6);
  CHECK(ex[1].kind == ExtremumKind::Minimum);
  CHECK(std::abs(ex[1].x - 1.5 * std::acos(-1.0)) < 1e-4);
  CHECK(ex[0].x < ex[1].x);  // sorted by location
}

TEST_CASE("jumps are flagged against the median neighbor difference") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 100; ++i) {
    const double x = 0.01 * i;
    xs.push_back(x);
    ys.push_back(0.1 * x + (x > 0.505 ? 1.0 : 0.0));
  }
  const auto ex = find_extrema(xs, ys);
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].kind == ExtremumKind::Jump);
  CHECK(ex[0].x == doctest::Approx(0.505).epsilon(1e-12));  // midpoint
  CHECK(ex[0].value == doctest::Approx(1.0 + 0.001).epsilon(1e-6));
  CHECK(ex[0].value > 0.0);  // signed height: upward step

  // A smooth line has no jumps and no extrema.
  std::vector<double> flat(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) flat[i] = 2.0 * xs[i];
  CHECK(find_extrema(xs, flat).empty());
}

TEST_CASE("scaling fit recovers an exact 1/N^2 law") {
  const std::vector<int> sizes{8, 10, 12, 14, 16};
  std::vector<double> values;
  for (int n : sizes) values.push_back(1.37 - 5.2 / (n * n));
  const auto fit = finite_size_scaling(sizes, values);
  CHECK(std::abs(fit.intercept - 1.37) < 1e-12);
  CHECK(std::abs(fit.slope + 5.2) < 1e-10);
  CHECK(fit.residual_rms < 1e-13);
  CHECK(fit.sizes == sizes);

  CHECK_THROWS_AS((void)finite_size_scaling({8, 10}, {1.0, 2.0}), UsageError);
  CHECK_THROWS_AS((void)finite_size_scaling({8, 10, 12}, {1.0, 2.0}),
                  UsageError);
}

TEST_CASE("ridge chaining follows features across columns") {
  // Rows: lambda in [0, 1]; columns: alpha in [0, 0.5]. Construct a value
  // surface whose derivative has one drifting peak plus one short-lived one.
  std::vector<double> params;
  for (int i = 0; i <= 100; ++i) params.push_back(0.01 * i);
  std::vector<double> xs;
  for (int c = 0; c <= 10; ++c) xs.push_back(0.05 * c);

  // Drift of 0.02 per column stays within the default three-row-step reach.
  auto peak_center = [](double alpha) { return 0.3 + 0.4 * alpha; };
  std::vector<std::vector<double>> value(xs.size());
  for (std::size_t c = 0; c < xs.size(); ++c) {
    value[c].resize(params.size());
    for (std::size_t r = 0; r < params.size(); ++r) {
      const double l = params[r];
      // Integral of a Gaussian bump: derivative peaks at peak_center.
      value[c][r] = std::erf((l - peak_center(xs[c])) / 0.05);
      if (c >= 4 && c <= 5) value[c][r] += 0.4 * std::erf((l - 0.9) / 0.04);
    }
  }

  RidgeOptions opts;
  opts.min_span_fraction = 0.9;
  const auto pd = phase_diagram(xs, params, value, opts);
  REQUIRE(pd.xs.size() == xs.size());
  REQUIRE(pd.value.size() == xs.size());
  REQUIRE(pd.dvalue.size() == xs.size());
  // Exactly one chain survives the span filter, tracking the drifting peak.
  REQUIRE(pd.ridges.size() == 1);
  const auto& ridge = pd.ridges[0];
  REQUIRE(ridge.xs.size() == xs.size());
  for (std::size_t c = 0; c < xs.size(); ++c)
    CHECK(std::abs(ridge.params[c] - peak_center(ridge.xs[c])) < 0.01);

  // Without the span filter the short-lived feature shows up as well.
  const auto all = phase_diagram(xs, params, value, RidgeOptions{});
  CHECK(all.ridges.size() == 2);
  bool found_short = false;
  for (const auto& r : all.ridges)
    if (r.xs.size() == 2 && std::abs(r.params[0] - 0.9) < 0.01)
      found_short = true;
  CHECK(found_short);

  // A jump step limit of zero breaks the drifting ridge into fragments.
  RidgeOptions tight;
  tight.max_jump_steps = 0;
  const auto frag = phase_diagram(xs, params, value, tight);
  CHECK(frag.ridges.size() > 2);
}
