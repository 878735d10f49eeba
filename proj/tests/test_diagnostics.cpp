#include "carbuncle/diagnostics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace carbuncle;

namespace {

const GasConstants gas{};

FieldSet make(const Grid2D& grid, const std::function<PrimitiveState(double, double)>& f) {
  return FieldSet::from_primitive(grid, f, gas);
}

// Planar shock between columns; rows listed in `shifted` move one cell east.
FieldSet shock_field(const Grid2D& grid, int face, const std::vector<int>& shifted) {
  FieldSet f(grid);
  for (int j = 0; j < grid.ny; ++j) {
    const bool moved = std::find(shifted.begin(), shifted.end(), j) != shifted.end();
    for (int i = 0; i < grid.nx; ++i) {
      const bool downstream = i < face + (moved ? 1 : 0);
      f.cell(i, j) = prim_to_cons(downstream ? PrimitiveState{3, 0.2, 0, 10} : PrimitiveState{1, -2, 0, 1}, gas);
    }
  }
  return f;
}

} // namespace

TEST_CASE("probe windows") {
  const Grid2D grid{10, 6, 1, 1};
  CHECK_NOTHROW(ProbeWindow::whole(grid).validate(grid));
  CHECK_THROWS_AS((ProbeWindow{3, 3, 0, 6}.validate(grid)), std::invalid_argument);
  CHECK_THROWS_AS((ProbeWindow{0, 11, 0, 6}.validate(grid)), std::invalid_argument);
  CHECK(ProbeWindow::columns(grid, 2, 5).width() == 3);
}

TEST_CASE("constant pressure detection") {
  const Grid2D grid{12, 4, 1, 1};
  const FieldSet uniform = make(grid, [](double, double) { return PrimitiveState{1, 0.3, 0.2, 2}; });
  const ConstantPressureCheck c = detect_constant_pressure(uniform, ProbeWindow::whole(grid), 1e-12, gas);
  CHECK(c.constant);
  CHECK(c.max_deviation == 0.0);

  // Sod tube at t = 0.25: the star region is found by the exact fan.
  const Grid2D tube{100, 1, 0.01, 1.0};
  const PrimitiveState l{1, 0, 0, 1}, r{0.125, 0, 0, 0.1};
  FieldSet f = make(tube, [&](double x, double) { return x < 0.5 ? l : r; });
  RunOptions opts;
  opts.t_end = 0.25;
  f = run(f, SchemeConfig{}, BoundarySpec::all(EdgeCondition::outflow()), opts, gas).final_state;
  const RiemannFan fan = solve_exact(l, r, gas);
  const double x_tail = 0.5 + fan.s1_tail * 0.25, x_shock = 0.5 + fan.s3_head * 0.25;
  int i0 = 0, i1 = 0;
  for (int i = 0; i < tube.nx; ++i) {
    if (tube.xc(i) > x_tail + 0.05 && i0 == 0) i0 = i;
    if (tube.xc(i) < x_shock - 0.05) i1 = i + 1;
  }
  CHECK(detect_constant_pressure(f, {i0, i1, 0, 1}, 1e-2, gas).constant);
  const int shock_cell = static_cast<int>(x_shock / tube.dx);
  CHECK_FALSE(detect_constant_pressure(f, {shock_cell - 3, shock_cell + 3, 0, 1}, 1e-2, gas).constant);
}

TEST_CASE("plane-wave condition residual") {
  const Grid2D grid{40, 8, 0.05, 0.1};
  const ProbeWindow w = ProbeWindow::whole(grid);
  const FieldSet flat = make(grid, [](double, double) { return PrimitiveState{1, 0, 0.4, 1}; });
  CHECK(plane_wave_condition_residual(flat, w, 1.0, gas) == 0.0);

  const FieldSet quad = make(grid, [](double x, double y) {
    return PrimitiveState{1 + 0.1 * y, 0.2, 0.3 * x * x - x, 1};
  });
  CHECK(plane_wave_condition_residual(quad, w, 0.7, gas) < 1e-10);

  const FieldSet wave = make(grid, [](double x, double y) {
    return PrimitiveState{1 + 0.2 * std::sin(y), 0.0, std::sin(10 * x), 1};
  });
  const double r = plane_wave_condition_residual(wave, w, 1.0, gas);
  CHECK(r > 80.0);
  CHECK(r < 120.0);

  CHECK_THROWS_AS(plane_wave_condition_residual(flat, {0, 2, 0, 8}, 1.0, gas), WindowTooSmall);
}

TEST_CASE("shock front positions") {
  const Grid2D grid{30, 6, 0.5, 0.5};
  FrontOptions opts;
  opts.upstream = UpstreamSide::East;
  const FrontPositions planar = shock_front_positions(shock_field(grid, 15, {}), opts, gas);
  CHECK(planar.distortion == 0.0);
  CHECK(planar.missing_rows.empty());
  CHECK(planar.x[0] == doctest::Approx(7.5));

  const FrontPositions odd = shock_front_positions(shock_field(grid, 15, {1, 3, 5}), opts, gas);
  CHECK(odd.distortion == doctest::Approx(grid.dx));

  // Translation by whole cells leaves the distortion alone.
  const FrontPositions moved = shock_front_positions(shock_field(grid, 19, {1, 3, 5}), opts, gas);
  CHECK(moved.distortion == doctest::Approx(odd.distortion));

  const FieldSet quiet = make(grid, [](double, double) { return PrimitiveState{1, 0, 0, 1}; });
  opts.p_upstream = 1.0;
  opts.p_downstream = 10.0;
  CHECK_THROWS_AS(shock_front_positions(quiet, opts, gas), NoFrontFound);
  opts.strict = false;
  const FrontPositions none = shock_front_positions(quiet, opts, gas);
  CHECK(none.missing_rows.size() == 6);
  CHECK(std::isnan(none.x[0]));
  CHECK(none.distortion == 0.0);
}

TEST_CASE("odd-even amplitude") {
  const Grid2D grid{6, 8, 1, 1};
  const FieldSet flat = make(grid, [](double x, double) { return PrimitiveState{1 + 0.1 * x, 0, 0, 1}; });
  CHECK(odd_even_amplitude(flat) == 0.0);
  const double a = 1e-3;
  const FieldSet zig = make(grid, [&](double, double y) {
    return PrimitiveState{1 + (static_cast<int>(y) % 2 ? a : -a), 0, 0, 1};
  });
  CHECK(odd_even_amplitude(zig) == doctest::Approx(2 * a));
  CHECK(odd_even_amplitude(zig, 2, 4) == doctest::Approx(2 * a));
}

TEST_CASE("post-shock noise") {
  const Grid2D grid{4, 4, 1, 1};
  const FieldSet f = make(grid, [](double x, double) { return PrimitiveState{1, 0, 0, x < 2 ? 1.0 : 3.0}; });
  CHECK(post_shock_noise(f, ProbeWindow::whole(grid), gas) == doctest::Approx(1.0));
  CHECK(post_shock_noise(f, {2, 4, 0, 4}, gas) == doctest::Approx(0.0));
}

TEST_CASE("error norms") {
  const Grid2D grid{10, 5, 0.1, 0.2};
  const auto exact = [](double x, double y, double) { return PrimitiveState{1 + x * y, 0.1, 0, 1}; };
  FieldSet f = make(grid, [&](double x, double y) { return exact(x, y, 0); });
  const ErrorNorms zero = error_vs_analytic(f, exact, ProbeWindow::whole(grid), gas);
  CHECK(zero.l1.norm() < 1e-15);
  CHECK(zero.linf.norm() < 1e-15);

  const double eps = 1e-3;
  f = make(grid, [&](double x, double y) {
    PrimitiveState w = exact(x, y, 0);
    w.rho += eps;
    return w;
  });
  const ErrorNorms e = error_vs_analytic(f, exact, ProbeWindow::whole(grid), gas);
  CHECK(e.linf[0] == doctest::Approx(eps));
  CHECK(e.l1[0] == doctest::Approx(eps * grid.width() * grid.height()));
  CHECK(e.linf[3] < 1e-14);
}

TEST_CASE("metrics are invariant under mirroring and tangential shifts") {
  const Grid2D grid{24, 8, 0.5, 0.5};
  const auto field = [](double shift, bool mirror) {
    return [=](double x, double y) {
      const double ys = mirror ? 4.0 - y : y;
      const double bump = 0.3 * std::sin(0.7 * x) * std::cos(0.9 * ys) + 0.1 * ys;
      const bool down = x < 6.0 + 0.5 * std::cos(ys);
      PrimitiveState w = down ? PrimitiveState{3 + bump, 0.2, 0.5 * x, 10 + bump} : PrimitiveState{1, -2, 0.5 * x, 1};
      w.v = (mirror ? -1 : 1) * w.v + shift;
      return w;
    };
  };
  const Grid2D& g = grid;
  const FieldSet base = make(g, field(0.0, false));
  const FieldSet shifted = make(g, field(2.5, false));
  const FieldSet mirrored = make(g, field(0.0, true));
  const ProbeWindow win{2, 10, 0, 8};
  FrontOptions fo;
  fo.p_upstream = 1.0;
  fo.p_downstream = 10.0;
  for (const FieldSet* other : {&shifted, &mirrored}) {
    CHECK(odd_even_amplitude(*other) == doctest::Approx(odd_even_amplitude(base)).epsilon(1e-12));
    CHECK(post_shock_noise(*other, win, gas) == doctest::Approx(post_shock_noise(base, win, gas)).epsilon(1e-12));
    CHECK(shock_front_positions(*other, fo, gas).distortion ==
          doctest::Approx(shock_front_positions(base, fo, gas).distortion).epsilon(1e-12));
  }
  CHECK(plane_wave_condition_residual(shifted, win, 0.8, gas) ==
        doctest::Approx(plane_wave_condition_residual(base, win, 0.8, gas)).epsilon(1e-9));
}

TEST_CASE("diagnostics report") {
  CHECK(DiagnosticsReport::csv_header() == "t,front_distortion,odd_even_amplitude,post_shock_noise,pw_residual,l1,linf");
  const Grid2D grid{12, 4, 1, 1};
  const FieldSet f = shock_field(grid, 6, {});
  DiagnosticsPlan plan;
  plan.front = FrontOptions{};
  plan.noise_window = ProbeWindow{0, 2, 0, 4};
  const DiagnosticsReport r = make_report(f, plan, gas);
  CHECK(r.front_distortion == 0.0);
  CHECK(r.post_shock_noise == doctest::Approx(0.0));
  CHECK(std::isnan(r.odd_even_amplitude));
  CHECK(std::isnan(r.pw_residual));
  CHECK_FALSE(r.errors.has_value());
  const std::string row = r.csv_row();
  CHECK(std::count(row.begin(), row.end(), ',') == 6);
  CHECK(row.find("nan") != std::string::npos);
}
