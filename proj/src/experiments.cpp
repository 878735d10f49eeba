#include "carbuncle/experiments.hpp"
#include "carbuncle/acoustic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace carbuncle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int pick(int value, int fallback) { return value > 0 ? value : fallback; }
double pick(double value, double fallback) { return value > 0.0 ? value : fallback; }

struct Drive {
  FieldSet initial;
  BoundarySpec bc;
  double t_end{0.0};
  DiagnosticsPlan plan;
  /// Called on every step (and the initial state) for running maxima.
  std::function<void(const FieldSet&, long)> track;
};

// Runs the solver with the configured cadences, collecting diagnostics and
// writing snapshots when an output directory is given.
ExperimentResult drive(const ExperimentConfig& cfg, std::string name, const Drive& d,
                       OutputDirectory* out) {
  ExperimentResult result;
  result.name = std::move(name);
  int snapshot_index = 0;

  const auto report = [&](const FieldSet& f) {
    DiagnosticsReport r = make_report(f, d.plan, cfg.gas);
    if (out) out->append_diagnostics(r);
    result.series.push_back(std::move(r));
  };

  RunOptions options;
  options.t_end = d.t_end;
  options.snapshot_every = cfg.snapshot_every;
  options.callback_every = 1;
  if (out) {
    options.on_snapshot = [&](const FieldSet& f, long) {
      out->write_snapshot(f, snapshot_index++, cfg.gas);
    };
  }
  options.on_step = [&](const FieldSet& f, long n) {
    if (d.track) d.track(f, n);
    if (cfg.diag_every > 0 && n % cfg.diag_every == 0) report(f);
  };

  RunResult run_result = run(d.initial, cfg.scheme, d.bc, options, cfg.gas);
  if (cfg.diag_every > 0 &&
      (result.series.empty() || result.series.back().t != run_result.final_state.t)) {
    report(run_result.final_state);
  }
  result.status = run_result.status;
  result.failure_time = run_result.failure_time;
  result.message = run_result.failure_message;
  result.steps = run_result.steps;
  result.final_state = std::move(run_result.final_state);
  result.set_metric("steps", static_cast<double>(result.steps));
  result.set_metric("blowup", result.status == RunStatus::Blowup ? 1.0 : 0.0);
  return result;
}

Grid2D make_grid(const ExperimentConfig& cfg, int nx, int ny, double dx, double dy) {
  Grid2D grid{pick(cfg.nx, nx), pick(cfg.ny, ny), pick(cfg.dx, dx), pick(cfg.dy, dy)};
  grid.validate();
  return grid;
}

} // namespace

double ExperimentResult::metric(std::string_view key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw std::out_of_range("no metric '" + std::string(key) + "'");
}

bool ExperimentResult::has_metric(std::string_view key) const {
  return std::any_of(metrics.begin(), metrics.end(),
                     [&](const auto& kv) { return kv.first == key; });
}

void ExperimentResult::set_metric(std::string key, double value) {
  for (auto& [k, v] : metrics) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metrics.emplace_back(std::move(key), value);
}

bool ExperimentResult::ok() const {
  return status != RunStatus::Blowup &&
         std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "sod", "stationary-shock", "quirk-duct", "elling-filament", "contact-advection",
      "perturbation-theory", "sweep"};
  return names;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, OutputDirectory* out) {
  cfg.validate();
  const std::string& e = cfg.experiment;
  if (e == "sod") return exp_sod(cfg, out);
  if (e == "stationary-shock") return exp_stationary_shock(cfg, out);
  if (e == "quirk-duct") return exp_quirk_duct(cfg, out);
  if (e == "elling-filament") return exp_elling_filament(cfg, out);
  if (e == "contact-advection") return exp_contact_advection(cfg, out);
  if (e == "perturbation-theory") return exp_perturbation_theory(cfg, out);
  if (e == "sweep") return exp_sweep(cfg, out);
  throw ConfigError("unknown experiment '" + e + "'");
}

// --- Sod shock tube -------------------------------------------------------

ExperimentResult exp_sod(const ExperimentConfig& cfg, OutputDirectory* out) {
  const int nx = pick(cfg.nx, 100);
  const int ny = pick(cfg.ny, 1);
  const double dx = pick(cfg.dx, 1.0 / nx);
  const Grid2D grid = make_grid(cfg, nx, ny, dx, ny == 1 ? 1.0 : dx);
  const double x_mid = 0.5 * grid.width();
  const PrimitiveState left{1.0, 0.0, 0.0, 1.0};
  const PrimitiveState right{0.125, 0.0, 0.0, 0.1};
  const RiemannFan fan = solve_exact(left, right, cfg.gas);

  Drive d;
  d.initial = FieldSet::from_primitive(
      grid, [&](double x, double) { return x < x_mid ? left : right; }, cfg.gas);
  d.bc = BoundarySpec::all(EdgeCondition::outflow());
  d.t_end = pick(cfg.t_end, 0.25);
  d.plan.analytic = [&](double x, double, double t) {
    if (t <= 0.0) return x < x_mid ? left : right;
    return sample_fan(fan, (x - x_mid) / t, cfg.gas);
  };

  ExperimentResult r = drive(cfg, "sod", d, out);
  const ErrorNorms e =
      error_vs_analytic(r.final_state, d.plan.analytic, ProbeWindow::whole(grid), cfg.gas);
  r.set_metric("l1_rho", e.l1[0] / grid.height());
  r.set_metric("linf_rho", e.linf[0]);
  r.set_metric("p_star", fan.p_star);
  r.set_metric("u_star", fan.u_star);
  return r;
}

// --- Stationary shock -----------------------------------------------------

ExperimentResult exp_stationary_shock(const ExperimentConfig& cfg, OutputDirectory* out) {
  const Grid2D grid = make_grid(cfg, 40, 20, 1.0, 1.0);
  const PrimitiveState pre{1.0, 0.0, 0.0, 1.0};
  // Only near-stationary shocks stay inside the domain for the whole run.
  if (std::abs(cfg.shock_speed) > 0.05 * sound_speed(pre, cfg.gas)) {
    throw ConfigError("stationary-shock needs |shock_speed| <= 0.05 c upstream");
  }
  const auto [up, down] = normal_shock_pair(pre, cfg.mach, cfg.shock_speed, cfg.gas);
  const int i_shock = grid.nx / 2;
  const double x_shock = grid.x0 + i_shock * grid.dx;
  const double height = grid.height();
  const double amp = cfg.perturb_amp;

  Drive d;
  d.initial = FieldSet::from_primitive(
      grid,
      [&](double x, double y) {
        if (x < x_shock) return up;
        PrimitiveState w = down;
        w.rho *= 1.0 + amp * std::sin(2.0 * kPi * (y - grid.y0) / height);
        return w;
      },
      cfg.gas);
  d.bc = {EdgeCondition::fixed(prim_to_cons(up, cfg.gas)),
          EdgeCondition::fixed(prim_to_cons(down, cfg.gas)), EdgeCondition::periodic(),
          EdgeCondition::periodic()};
  d.t_end = pick(cfg.t_end, 500.0 * cfl_dt(d.initial, cfg.scheme.cfl, cfg.gas));

  const ProbeWindow noise{std::min(i_shock + 5, grid.nx - 1), grid.nx, 0, grid.ny};
  d.plan.noise_window = noise;
  if (grid.ny >= 2) d.plan.odd_even_columns = noise;
  d.plan.front = FrontOptions{UpstreamSide::West, 0.5, up.p, down.p, false};

  double max_change = 0.0, oe0 = 0.0, oe_max = 0.0, noise0 = 0.0, noise_max = 0.0;
  const FieldSet& initial = d.initial;
  d.track = [&](const FieldSet& f, long n) {
    max_change = std::max(max_change, f.max_abs_difference(initial));
    const double oe = grid.ny >= 2 ? odd_even_amplitude(f, noise.i0, noise.i1) : 0.0;
    const double ns = post_shock_noise(f, noise, cfg.gas);
    if (n == 0) {
      oe0 = oe;
      noise0 = ns;
    }
    oe_max = std::max(oe_max, oe);
    noise_max = std::max(noise_max, ns);
  };

  ExperimentResult r = drive(cfg, "stationary-shock", d, out);
  const bool blew = r.status == RunStatus::Blowup;
  r.set_metric("max_field_change", max_change);
  r.set_metric("odd_even_initial", oe0);
  r.set_metric("odd_even_growth", blew ? kInf : (oe0 > 0.0 ? oe_max / oe0 : kNaN));
  r.set_metric("max_noise", noise_max);
  // The seed perturbs density only, so the initial pressure noise is zero up
  // to rounding; growth is measured against the seed carried to pressure.
  const double noise_ref = std::max(noise0, std::abs(amp) * down.p);
  r.set_metric("noise_growth", blew ? kInf : (noise_ref > 0.0 ? noise_max / noise_ref : kNaN));
  return r;
}

// --- Quirk duct -----------------------------------------------------------

ExperimentResult exp_quirk_duct(const ExperimentConfig& cfg, OutputDirectory* out) {
  const Grid2D grid = make_grid(cfg, 200, 10, 1.0, 1.0);
  if (grid.ny % 2 != 0) throw ConfigError("quirk-duct needs an even number of rows");
  const PrimitiveState pre{1.4, 0.0, 0.0, 1.0};
  const double c_pre = sound_speed(pre, cfg.gas);
  const double speed = cfg.mach * c_pre;
  // Left-running shock into gas at rest, mirrored to run to the right.
  const PrimitiveState behind = normal_shock_pair(pre, cfg.mach, -speed, cfg.gas).second;
  const PrimitiveState post{behind.rho, -behind.u, 0.0, behind.p};
  const double x_shock = grid.x0 + 5.0 * grid.dx;
  const int row_lo = grid.ny / 2 - 1;
  const int row_hi = grid.ny / 2;

  Drive d;
  d.initial = FieldSet::from_primitive(
      grid, [&](double x, double) { return x < x_shock ? post : pre; }, cfg.gas);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  for (int i = 0; i < grid.nx; ++i) {
    if (grid.xc(i) < x_shock) continue;
    for (const int j : {row_lo, row_hi}) {
      PrimitiveState w = pre;
      if (cfg.seed_mode == SeedMode::OddEven) {
        w.rho *= j == row_lo ? 1.0 - cfg.perturb_amp : 1.0 + cfg.perturb_amp;
      } else {
        w.rho *= 1.0 + cfg.perturb_amp * noise(rng);
      }
      d.initial.cell(i, j) = prim_to_cons(w, cfg.gas);
    }
  }
  d.bc = {EdgeCondition::fixed(prim_to_cons(post, cfg.gas)), EdgeCondition::outflow(),
          EdgeCondition::reflective(), EdgeCondition::reflective()};
  d.t_end = pick(cfg.t_end, (grid.x0 + 0.8 * grid.width() - x_shock) / speed);

  const FrontOptions front{UpstreamSide::East, 0.5, pre.p, post.p, false};
  d.plan.front = front;
  d.plan.odd_even_columns = ProbeWindow::whole(grid);
  d.plan.noise_window = ProbeWindow::whole(grid);

  double oe0 = 0.0, oe_max = 0.0, dist_max = 0.0;
  d.track = [&](const FieldSet& f, long n) {
    const double oe = odd_even_amplitude(f);
    if (n == 0) oe0 = oe;
    oe_max = std::max(oe_max, oe);
    dist_max = std::max(dist_max, shock_front_positions(f, front, cfg.gas).distortion);
  };

  ExperimentResult r = drive(cfg, "quirk-duct", d, out);
  const bool blew = r.status == RunStatus::Blowup;
  r.set_metric("odd_even_initial", oe0);
  r.set_metric("odd_even_max", oe_max);
  r.set_metric("odd_even_amplification", blew ? kInf : (oe0 > 0.0 ? oe_max / oe0 : kNaN));
  r.set_metric("max_front_distortion", blew ? kInf : dist_max / grid.dx);
  return r;
}

// --- Elling filament ------------------------------------------------------

ExperimentResult exp_elling_filament(const ExperimentConfig& cfg, OutputDirectory* out) {
  const Grid2D grid = make_grid(cfg, 200, 20, 1.0, 1.0);
  const PrimitiveState pre{1.0, 0.0, 0.0, 1.0};
  const auto [up, down] = normal_shock_pair(pre, cfg.mach, 0.0, cfg.gas);
  const double x_shock = grid.x0 + std::floor(0.75 * grid.nx) * grid.dx;
  const int row = grid.ny / 2;
  const auto upstream_state = [&](int j) {
    PrimitiveState w = up;
    if (cfg.filament && j == row) w.u = 0.0;
    return w;
  };

  Drive d;
  d.initial = FieldSet(grid);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      d.initial.cell(i, j) =
          prim_to_cons(grid.xc(i) < x_shock ? upstream_state(j) : down, cfg.gas);
    }
  }
  // The filament is fed through the inflow boundary for the whole run.
  std::vector<ConservedState> inflow;
  for (int j = 0; j < grid.ny; ++j) inflow.push_back(prim_to_cons(upstream_state(j), cfg.gas));
  d.bc = {EdgeCondition::profile(std::move(inflow)),
          EdgeCondition::fixed(prim_to_cons(down, cfg.gas)), EdgeCondition::outflow(),
          EdgeCondition::outflow()};
  d.t_end = pick(cfg.t_end, 0.5 * grid.width());

  const FrontOptions front{UpstreamSide::West, 0.5, up.p, down.p, false};
  d.plan.front = front;
  if (grid.ny >= 2) d.plan.odd_even_columns = ProbeWindow::whole(grid);
  d.plan.noise_window =
      ProbeWindow{static_cast<int>(std::floor(0.75 * grid.nx)), grid.nx, 0, grid.ny};

  double dist_max = 0.0, v_max = 0.0, max_change = 0.0;
  const FieldSet& initial = d.initial;
  d.track = [&](const FieldSet& f, long) {
    max_change = std::max(max_change, f.max_abs_difference(initial));
    dist_max = std::max(dist_max, shock_front_positions(f, front, cfg.gas).distortion);
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        v_max = std::max(v_max, std::abs(f.cell(i, j)[2] / f.cell(i, j)[0]));
      }
    }
  };

  ExperimentResult r = drive(cfg, "elling-filament", d, out);
  const bool blew = r.status == RunStatus::Blowup;
  r.set_metric("max_front_distortion", blew ? kInf : dist_max / grid.dx);
  r.set_metric("final_front_distortion",
               shock_front_positions(r.final_state, front, cfg.gas).distortion / grid.dx);
  r.set_metric("max_abs_v", v_max);
  r.set_metric("max_field_change", max_change);
  return r;
}

// --- Contact advection ----------------------------------------------------

ContactProfile contact_profile(bool discontinuous) {
  ContactProfile p;
  p.u_r = 1.0;
  p.p_r = 1.0;
  if (discontinuous) {
    p.rho0_left = [](double, double) { return 2.0; };
    p.rho0_right = [](double, double) { return 1.0; };
    // Uniform v: any variation of v makes the conservative update raise the
    // pressure by O(lambda (1 - lambda) dv^2), which would mask the contact.
    p.v0 = [](double, double) { return 0.1; };
  } else {
    const auto rho = [](double x, double) { return 1.0 + 0.2 * std::sin(2.0 * kPi * x); };
    p.rho0_left = rho;
    p.rho0_right = rho;
    p.v0 = [](double x, double) { return 0.1 * std::sin(2.0 * kPi * x); };
  }
  return p;
}

ExperimentResult exp_contact_advection(const ExperimentConfig& cfg, OutputDirectory* out) {
  const int nx = pick(cfg.nx, 128);
  const int ny = pick(cfg.ny, 1);
  const double dx = pick(cfg.dx, 1.0 / nx);
  Grid2D grid = make_grid(cfg, nx, ny, dx, ny == 1 ? 1.0 : dx);
  // Smooth data live on the periodic unit interval; the contact starts at 0.
  if (cfg.contact) grid.x0 = -0.5 * grid.width();
  const ContactProfile profile = contact_profile(cfg.contact);
  const GasConstants& g = cfg.gas;

  Drive d;
  d.initial = FieldSet::from_primitive(
      grid, [&](double x, double y) { return prop1_solution(profile, x, y, 0.0, g); }, g);
  if (cfg.contact) {
    d.bc = {EdgeCondition::outflow(), EdgeCondition::outflow(), EdgeCondition::periodic(),
            EdgeCondition::periodic()};
  } else {
    d.bc = BoundarySpec::all(EdgeCondition::periodic());
  }
  d.t_end = pick(cfg.t_end, cfg.contact ? 0.25 : 0.5);
  d.plan.analytic = [&](double x, double y, double t) {
    return prop1_solution(profile, x, y, t, g);
  };
  d.plan.pw_window = ProbeWindow::whole(grid);
  d.plan.noise_window = ProbeWindow::whole(grid);

  double p_dev = 0.0;
  d.track = [&](const FieldSet& f, long) {
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        p_dev = std::max(p_dev, std::abs(f.primitive(i, j, g).p - profile.p_r) / profile.p_r);
      }
    }
  };

  ExperimentResult r = drive(cfg, "contact-advection", d, out);
  const ErrorNorms e = error_vs_analytic(r.final_state, d.plan.analytic,
                                         ProbeWindow::whole(grid), g);
  r.set_metric("l1_rho", e.l1[0] / grid.height());
  r.set_metric("linf_rho", e.linf[0]);
  r.set_metric("max_pressure_deviation", p_dev);

  // One solver step against the upwind update q_i - (u dt/dx)(q_i - q_{i-1}).
  {
    const double dt = cfl_dt(d.initial, cfg.scheme.cfl, g);
    FieldSet ghosts = d.initial;
    apply_boundary(ghosts, d.bc);
    const FieldSet stepped = step(d.initial, cfg.scheme, d.bc, dt, g);
    const double lambda = profile.u_r * dt / grid.dx;
    double diff = 0.0;
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        const ConservedState q = ghosts.cell(i, j);
        const ConservedState upwind = q - lambda * (q - ghosts.cell(i - 1, j));
        diff = std::max(diff, (stepped.cell(i, j) - upwind).cwiseAbs().maxCoeff());
      }
    }
    r.set_metric("upwind_difference", diff);
  }

  if (cfg.contact) {
    const double rl = profile.rho0_left(0.0, 0.0);
    const double rr = profile.rho0_right(0.0, 0.0);
    const double lo = std::min(rl, rr) + 0.1 * std::abs(rl - rr);
    const double hi = std::max(rl, rr) - 0.1 * std::abs(rl - rr);
    int width = 0;
    for (int i = 0; i < grid.nx; ++i) {
      const double rho = r.final_state.cell(i, 0)[0];
      if (rho > lo && rho < hi) ++width;
    }
    r.set_metric("contact_width", width);
  }
  return r;
}

// --- Perturbation theory --------------------------------------------------

namespace {

// Sum of a few random Fourier modes on the 2 pi periodic box.
struct RandomModes {
  struct Mode {
    int kx, ky;
    double amp, phase;
  };
  double mean{0.0};
  std::vector<Mode> modes;

  static RandomModes draw(std::mt19937_64& rng, double mean, double amp, int count) {
    std::uniform_int_distribution<int> k(-2, 2);
    std::uniform_real_distribution<double> a(-amp, amp), ph(0.0, 2.0 * kPi);
    RandomModes m{mean, {}};
    for (int n = 0; n < count; ++n) m.modes.push_back({k(rng), k(rng), a(rng), ph(rng)});
    return m;
  }
  double operator()(double x, double y) const {
    double s = mean;
    for (const Mode& m : modes) s += m.amp * std::sin(m.kx * x + m.ky * y + m.phase);
    return s;
  }
};

CheckRow check(std::string name, double measured, double limit) {
  return {std::move(name), measured, limit, measured <= limit};
}

// Residual of the linearised system at (x, y, t) for a solution given as a
// callable returning (rho', u', v').
template <typename Sol>
double linearised_residual(const BackgroundFlow& bg, Sol&& sol, double x, double y, double t) {
  const double h = fd_step(bg.scale);
  const Eigen::Vector3d wt = central_difference([&](double s) { return sol(x, y, s); }, t, h);
  const Eigen::Vector3d wx = central_difference([&](double s) { return sol(s, y, t); }, x, h);
  const Eigen::Vector3d wy = central_difference([&](double s) { return sol(x, s, t); }, y, h);
  const Eigen::Vector3d w = sol(x, y, t);
  const Eigen::Vector3d r =
      wt + bg.u(x, y, t) * wx + bg.v(x, y, t) * wy + bg.jacobian(x, y, t) * w.tail<2>();
  return r.cwiseAbs().maxCoeff();
}

} // namespace

ExperimentResult exp_perturbation_theory(const ExperimentConfig& cfg, OutputDirectory* out) {
  ExperimentResult r;
  r.name = "perturbation-theory";
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  PerturbationField init;
  {
    const RandomModes a = RandomModes::draw(rng, 0.0, 0.01, 3);
    const RandomModes b = RandomModes::draw(rng, 0.0, 0.01, 3);
    const RandomModes c = RandomModes::draw(rng, 0.0, 0.01, 3);
    init.rho0 = a;
    init.u0 = b;
    init.v0 = c;
  }

  // Constant background: nothing grows.
  {
    const EnergyBound eb = energy_bound(BackgroundFlow::uniform(1.0, 0.3, -0.2), {}, 5.0);
    r.checks.push_back(check("constant_background_M", eb.M, 0.0));
    r.checks.push_back(check("constant_background_factor_minus_1", eb.factor - 1.0, 0.0));
  }

  // Smooth random background carried by a uniform velocity.
  const double U = unit(rng), V = unit(rng);
  const RandomModes rho_b0 = RandomModes::draw(rng, 1.0, 0.1, 4);
  BackgroundFlow bg;
  bg.rho = [=](double x, double y, double t) { return rho_b0(x - U * t, y - V * t); };
  bg.u = [=](double, double, double) { return U; };
  bg.v = [=](double, double, double) { return V; };
  bg.scale = 1.0;

  {
    double worst = 0.0;
    const auto sol = [&](double x, double y, double t) {
      return duhamel_solution(bg, init, x, y, t).vector();
    };
    for (int n = 0; n < 50; ++n) {
      const double x = 3.0 * unit(rng), y = 3.0 * unit(rng), t = 2.0 + unit(rng);
      worst = std::max(worst, linearised_residual(bg, sol, x, y, t));
    }
    r.checks.push_back(check("duhamel_residual", worst, 1e-5));
  }

  // Linear growth on a steady background at rest.
  {
    BackgroundFlow steady;
    steady.rho = [&](double x, double y, double) { return rho_b0(x, y); };
    steady.u = [](double, double, double) { return 0.0; };
    steady.v = [](double, double, double) { return 0.0; };
    const auto rate = [&](double t) {
      double s = 0.0;
      for (int j = 0; j < 16; ++j) {
        for (int i = 0; i < 16; ++i) {
          const double x = 2.0 * kPi * i / 16, y = 2.0 * kPi * j / 16;
          const PerturbationValue w = duhamel_solution(steady, init, x, y, t);
          s += (w.vector() - w.homogeneous()).squaredNorm();
        }
      }
      return std::sqrt(s) / t;
    };
    const double r0 = rate(0.5);
    double spread = 0.0;
    for (const double t : {1.0, 2.0, 4.0, 8.0}) {
      spread = std::max(spread, std::abs(rate(t) - r0) / r0);
    }
    r.checks.push_back(check("linear_growth_rate_spread", spread, 1e-8));
  }

  // Energy inequality on the periodic box, same sample points for M and the
  // discrete norm.
  {
    constexpr int n = 32;
    const auto norm = [&](double t) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const double x = 2.0 * kPi * i / n, y = 2.0 * kPi * j / n;
          s += duhamel_solution(bg, init, x, y, t).vector().squaredNorm();
        }
      }
      return std::sqrt(s);
    };
    const double n0 = norm(0.0);
    double worst = 0.0;
    for (const double t : {0.5, 1.0, 2.0, 4.0}) {
      const SampleDomain dom{0.0, 2.0 * kPi * (n - 1) / n, 0.0, 2.0 * kPi * (n - 1) / n, n, n, 9};
      const EnergyBound eb = energy_bound(bg, dom, t);
      worst = std::max(worst, norm(t) / (eb.factor * n0));
    }
    r.checks.push_back(check("energy_ratio_to_bound", worst, 1.0));
  }

  // Delta source: halving the mollifier width doubles the peak.
  {
    const double w = pick(cfg.mollifier_width, 0.1);
    const DeltaSourceInit di{[](double) { return 0.0; }, [](double) { return 0.01; }};
    const double t = 3.0;
    DeltaSourceSpec spec{1.0, 1.0, w, JumpKind::Density};
    const double peak = std::abs(delta_source_solution(spec, di, t, t));
    spec.width = 0.5 * w;
    const double half = std::abs(delta_source_solution(spec, di, t, t));
    r.checks.push_back(check("delta_peak_doubling_error", std::abs(half / peak - 2.0), 1e-6));
  }

  // Acoustic energy over 1000 leapfrog steps.
  {
    const PeriodicGrid pg{64, 64, 2.0 * kPi, 2.0 * kPi};
    const RandomModes a = RandomModes::draw(rng, 0.0, 1e-3, 4);
    const RandomModes b = RandomModes::draw(rng, 0.0, 1e-3, 4);
    Eigen::MatrixXd a0(pg.ny, pg.nx), r0(pg.ny, pg.nx);
    for (int j = 0; j < pg.ny; ++j) {
      for (int i = 0; i < pg.nx; ++i) {
        a0(j, i) = a(i * pg.dx(), j * pg.dy());
        r0(j, i) = b(i * pg.dx(), j * pg.dy());
      }
    }
    const AcousticBackground ab{1.2, 0.4, -0.1};
    AcousticPropagator prop(pg, ab, a0, r0, 0.5 * AcousticPropagator::max_stable_dt(pg, ab.c0));
    const double e0 = prop.energy();
    double drift = 0.0;
    for (int s = 0; s < 1000; ++s) {
      prop.step();
      drift = std::max(drift, std::abs(prop.energy() - e0) / e0);
    }
    r.checks.push_back(check("acoustic_energy_drift", drift, 1e-6));
  }

  // Constant-pressure solution: exact for v0(x), energy defect for v0(y).
  {
    ContactProfile p = contact_profile(false);
    p.rho0_left = p.rho0_right = [](double x, double y) {
      return 1.0 + 0.2 * std::sin(x) * std::cos(y);
    };
    p.v0 = [](double x, double) { return 0.1 * std::sin(x); };
    const TransportResidual ra = prop1_residual(p, 3.0, 0.4, 2.0, cfg.gas);
    r.checks.push_back(
        check("prop1a_residual", std::max({std::abs(ra.rho), std::abs(ra.v), std::abs(ra.E)}),
              1e-6));

    ContactProfile q = p;
    q.rho0_left = q.rho0_right = [](double x, double) { return 1.0 + 0.2 * std::sin(x); };
    q.v0 = [](double, double y) { return 0.1 * y; };
    const double x = 3.0, y = 0.7, t = 2.0;
    const TransportResidual rb = prop1_residual(q, x, y, t, cfg.gas);
    const PrimitiveState w = prop1_solution(q, x, y, t, cfg.gas);
    r.checks.push_back(check("prop1b_energy_defect_error",
                             std::abs(rb.E - w.rho * w.v * w.v * 0.1), 1e-6));
  }

  for (const CheckRow& c : r.checks) r.set_metric(c.name, c.measured);
  if (out) {
    std::ostringstream os;
    os.precision(6);
    os << "check,measured,limit,pass\n";
    for (const CheckRow& c : r.checks) {
      os << c.name << ',' << c.measured << ',' << c.limit << ',' << (c.pass ? "pass" : "FAIL")
         << '\n';
    }
    out->write_text("checks.csv", os.str());
  }
  return r;
}

// --- Sweep ----------------------------------------------------------------

ExperimentResult exp_sweep(const ExperimentConfig& cfg, OutputDirectory* out) {
  struct Job {
    ExperimentConfig cfg;
    std::string tag;
    ExperimentResult result;
    std::string error;
  };
  std::vector<Job> jobs;
  for (const char* e : {"quirk-duct", "elling-filament"}) {
    for (const FluxKind f : {FluxKind::Godunov, FluxKind::Roe, FluxKind::Hlle}) {
      Job j;
      j.cfg = cfg;
      j.cfg.experiment = e;
      j.cfg.scheme.flux = f;
      j.cfg.scheme.threads = 1;
      j.tag = std::string(e) + "." + std::string(to_string(f));
      jobs.push_back(std::move(j));
    }
  }

  const auto work = [&](Job& job) {
    try {
      std::optional<OutputDirectory> dir;
      if (out) {
        std::string sub = job.tag;
        std::replace(sub.begin(), sub.end(), '.', '_');
        dir.emplace(out->root() / sub);
      }
      const std::string started = wall_clock_now();
      job.result = run_experiment(job.cfg, dir ? &*dir : nullptr);
      if (dir) {
        RunManifest m;
        m.command = job.cfg.experiment;
        m.config_echo = job.cfg.echo();
        m.started = started;
        m.finished = wall_clock_now();
        m.status = std::string(to_string(job.result.status));
        m.message = job.result.message;
        m.metrics = job.result.metrics;
        m.outputs = dir->files();
        write_manifest(dir->root() / "manifest.txt", m);
      }
    } catch (const std::exception& e) {
      job.error = e.what();
    }
  };

  const unsigned workers =
      std::clamp(std::thread::hardware_concurrency(), 1u, static_cast<unsigned>(jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < jobs.size(); k += workers) work(jobs[k]);
      });
    }
  }

  ExperimentResult r;
  r.name = "sweep";
  std::ostringstream summary;
  summary.precision(8);
  summary << "experiment,flux,status,metric,value\n";
  for (Job& job : jobs) {
    if (!job.error.empty()) throw std::runtime_error(job.tag + ": " + job.error);
    if (job.result.status == RunStatus::Blowup) r.status = RunStatus::Blowup;
    for (const auto& [k, v] : job.result.metrics) {
      r.set_metric(job.tag + "." + k, v);
      summary << job.cfg.experiment << ',' << to_string(job.cfg.scheme.flux) << ','
              << to_string(job.result.status) << ',' << k << ',' << v << '\n';
    }
  }
  if (out) out->write_text("summary.csv", summary.str());
  return r;
}

} // namespace carbuncle
