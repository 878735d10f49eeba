#include "carbuncle/experiments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace carbuncle;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("carbuncle_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int lab(const std::string& args) {
  const std::string cmd = std::string(CARBUNCLE_LAB) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig config(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  return cfg;
}

} // namespace

TEST_CASE("config file parsing") {
  std::istringstream in(R"(
# comment
[run]
experiment = quirk-duct
t_end = 2.5     ; trailing comment
[grid]
nx = 64
ny = 8
[scheme]
flux = roe
cfl = 0.4
entropy_fix = true
threads = 2
[experiment]
seed = 42
seed_mode = random
filament = false
)");
  ExperimentConfig cfg;
  load_config(in, cfg);
  CHECK(cfg.experiment == "quirk-duct");
  CHECK(cfg.t_end == 2.5);
  CHECK(cfg.nx == 64);
  CHECK(cfg.ny == 8);
  CHECK(cfg.scheme.flux == FluxKind::Roe);
  CHECK(cfg.scheme.cfl == 0.4);
  CHECK(cfg.scheme.flux_options.roe_entropy_fix);
  CHECK(cfg.scheme.threads == 2);
  CHECK(cfg.seed == 42);
  CHECK(cfg.seed_mode == SeedMode::Random);
  CHECK_FALSE(cfg.filament);
  CHECK_NOTHROW(cfg.validate());

  // The echo reads back to the same configuration.
  ExperimentConfig again;
  std::istringstream echo(cfg.echo());
  load_config(echo, again);
  CHECK(again.echo() == cfg.echo());
}

TEST_CASE("config errors name the line") {
  const auto fails_with = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    ExperimentConfig cfg;
    try {
      load_config(in, cfg);
    } catch (const ConfigError& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  CHECK(fails_with("[grid]\nnx = ten\n", "line 2"));
  CHECK(fails_with("[grid\n", "line 1"));
  CHECK(fails_with("\n\nbogus = 1\n", "line 3"));
  CHECK(fails_with("nx\n", "line 1"));
  CHECK(fails_with("[scheme]\nflux = hllc\n", "hllc"));

  ExperimentConfig cfg;
  cfg.set("cfl", "1.5");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.nx = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/carbuncle.cfg", cfg), ConfigError);
  CHECK_THROWS_AS(run_experiment(config("no-such-experiment")), ConfigError);
}

TEST_CASE("names") {
  CHECK(parse_seed_mode("odd-even") == SeedMode::OddEven);
  CHECK(parse_seed_mode("random") == SeedMode::Random);
  CHECK(parse_splitting("strang") == Splitting::Strang);
  CHECK(to_string(Splitting::Unsplit) == "unsplit");
  const auto& names = experiment_names();
  for (const char* n : {"sod", "stationary-shock", "quirk-duct", "elling-filament", "contact-advection",
                        "perturbation-theory", "sweep"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
}

TEST_CASE("output directory and manifest") {
  const fs::path dir = scratch("output");
  OutputDirectory out(dir);
  const Grid2D grid{3, 2, 1, 1};
  const FieldSet f = FieldSet::from_primitive(grid, [](double, double) { return PrimitiveState{1, 0, 0, 1}; }, GasConstants{});
  out.write_snapshot(f, 7, GasConstants{});
  DiagnosticsReport r;
  out.append_diagnostics(r);
  out.append_diagnostics(r);
  CHECK(fs::exists(dir / "snap_0007.csv"));
  const std::string snap = slurp(dir / "snap_0007.csv");
  CHECK(snap.rfind("i,j,x,y,rho,u,v,p,E\n", 0) == 0);
  CHECK(std::count(snap.begin(), snap.end(), '\n') == 7);
  const std::string diag = slurp(dir / "diag.csv");
  CHECK(std::count(diag.begin(), diag.end(), '\n') == 3);
  CHECK(out.files().size() == 2);

  RunManifest m;
  m.command = "sod";
  m.status = "completed";
  m.metrics = {{"l1_rho", 0.5}};
  m.outputs = out.files();
  write_manifest(dir / "manifest.txt", m);
  const std::string text = slurp(dir / "manifest.txt");
  CHECK(text.find("command = sod") != std::string::npos);
  CHECK(text.find("l1_rho = 0.5") != std::string::npos);
  CHECK(text.find("snap_0007.csv") != std::string::npos);
}

TEST_CASE("Sod experiment") {
  ExperimentConfig cfg = config("sod");
  const ExperimentResult r100 = run_experiment(cfg);
  CHECK(r100.ok());
  CHECK(r100.metric("l1_rho") <= 0.02);
  CHECK(r100.metric("p_star") == doctest::Approx(0.30313).epsilon(1e-5));

  cfg.nx = 200;
  const ExperimentResult r200 = run_experiment(cfg);
  // First-order convergence limited by the contact, whose smeared width
  // grows like sqrt(n): measured ratio 1.56.
  CHECK(r100.metric("l1_rho") / r200.metric("l1_rho") >= 1.5);

  cfg.nx = 100;
  cfg.scheme.flux = FluxKind::Hlle;
  CHECK(run_experiment(cfg).metric("l1_rho") >= r100.metric("l1_rho"));
  CHECK_THROWS_AS(r100.metric("nope"), std::out_of_range);
}

TEST_CASE("stationary shock experiment") {
  for (double mach : {2.0, 6.0}) {
    ExperimentConfig cfg = config("stationary-shock");
    cfg.mach = mach;
    cfg.perturb_amp = 0.0;
    const ExperimentResult r = run_experiment(cfg);
    CHECK(r.steps == 500);
    CHECK(r.metric("max_field_change") <= 1e-11);
    CHECK(r.metric("max_noise") <= 1e-11);
  }

  ExperimentConfig cfg = config("stationary-shock");
  cfg.shock_speed = 0.1;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg.shock_speed = 0.02;
  cfg.perturb_amp = 0.0;
  CHECK(run_experiment(cfg).metric("blowup") == 0.0);
  cfg.shock_speed = 0.0;
  cfg.perturb_amp = 1e-4;
  cfg.scheme.flux = FluxKind::Roe;
  const ExperimentResult roe = run_experiment(cfg);
  cfg.scheme.flux = FluxKind::Hlle;
  const ExperimentResult hlle = run_experiment(cfg);
  CHECK(roe.metric("odd_even_growth") >= 10.0 * hlle.metric("odd_even_growth"));
  // HLLE noise settles at a few tenths of a percent of the downstream
  // pressure, well below the Roe level.
  CHECK(hlle.metric("max_noise") < 0.2 * roe.metric("max_noise"));
  CHECK(hlle.metric("blowup") == 0.0);
}

TEST_CASE("Quirk duct without a seed stays planar under HLLE") {
  ExperimentConfig cfg = config("quirk-duct");
  cfg.scheme.flux = FluxKind::Hlle;
  cfg.perturb_amp = 0.0;
  const ExperimentResult r = run_experiment(cfg);
  CHECK(r.metric("max_front_distortion") < 1.0);

  cfg.ny = 9;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("Quirk duct seeding is deterministic") {
  ExperimentConfig cfg = config("quirk-duct");
  cfg.nx = 60;
  cfg.ny = 6;
  cfg.seed_mode = SeedMode::Random;
  cfg.seed = 9;
  const ExperimentResult a = run_experiment(cfg);
  const ExperimentResult b = run_experiment(cfg);
  CHECK(a.final_state.max_abs_difference(b.final_state) == 0.0);
  cfg.seed = 10;
  CHECK(run_experiment(cfg).metric("odd_even_initial") != a.metric("odd_even_initial"));
}

TEST_CASE("Elling filament baseline is steady") {
  ExperimentConfig cfg = config("elling-filament");
  cfg.filament = false;
  const ExperimentResult r = run_experiment(cfg);
  CHECK(r.metric("max_field_change") <= 1e-11);
  CHECK(r.metric("max_front_distortion") == 0.0);
}

TEST_CASE("contact advection") {
  ExperimentConfig cfg = config("contact-advection");
  cfg.t_end = 1e-300;
  cfg.nx = 32;
  CHECK(run_experiment(cfg).metric("l1_rho") < 1e-12);

  cfg = config("contact-advection");
  cfg.contact = true;
  double prev_width = 0.0;
  for (int n : {64, 256}) {
    cfg.nx = n;
    const ExperimentResult r = run_experiment(cfg);
    CHECK(r.metric("max_pressure_deviation") <= 1e-10);
    const double width = r.metric("contact_width");
    CHECK(width >= std::sqrt(n) / 2);
    CHECK(width <= n);
    CHECK(width > prev_width);
    prev_width = width;
  }
  CHECK(run_experiment(config("contact-advection")).metric("upwind_difference") <= 1e-13);
}

TEST_CASE("perturbation-theory report") {
  const fs::path dir = scratch("pt");
  ExperimentConfig cfg = config("perturbation-theory");
  OutputDirectory out(dir);
  const ExperimentResult r = run_experiment(cfg, &out);
  CHECK(r.ok());
  for (const CheckRow& c : r.checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
  CHECK(fs::exists(dir / "checks.csv"));
}

TEST_CASE("command-line tool") {
  const fs::path dir = scratch("cli");
  CHECK(lab("--help") == 0);
  CHECK(lab("") == 3);
  CHECK(lab("sod --nx abc") == 3);
  CHECK(lab("sod --flux hllc --out " + (dir / "bad").string()) == 3);
  CHECK(fs::exists(dir / "bad" / "manifest.txt"));
  CHECK(slurp(dir / "bad" / "manifest.txt").find("exit_code = 3") != std::string::npos);

  CHECK(lab("sod --nx 50 --out " + (dir / "ok").string()) == 0);
  const std::string m = slurp(dir / "ok" / "manifest.txt");
  CHECK(m.find("grid.nx = 50") != std::string::npos);
  CHECK(m.find("l1_rho") != std::string::npos);
  CHECK(fs::exists(dir / "ok" / "diag.csv"));
  CHECK(fs::exists(dir / "ok" / "snap_0000.csv"));

  // File values are overridden by flags.
  {
    std::ofstream f(dir / "run.cfg");
    f << "[grid]\nnx = 40\n[scheme]\nflux = hlle\n";
  }
  CHECK(lab("sod --config " + (dir / "run.cfg").string() + " --nx 30 --out " + (dir / "cfg").string()) == 0);
  const std::string c = slurp(dir / "cfg" / "manifest.txt");
  CHECK(c.find("grid.nx = 30") != std::string::npos);
  CHECK(c.find("scheme.flux = hlle") != std::string::npos);
}
