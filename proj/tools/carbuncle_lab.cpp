// carbuncle-lab: command-line front end for the experiment registry.
//
//   carbuncle-lab quirk-duct --flux roe --nx 200 --ny 10 --out runs/quirk
//
// Exit status: 0 success, 1 failed checks or runtime error, 2 blow-up,
// 3 configuration error.

#include "carbuncle/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

using namespace carbuncle;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitBlowup = 2;
constexpr int kExitConfig = 3;

struct Overrides {
  std::optional<std::string> flux;
  std::optional<int> nx, ny;
  std::optional<double> cfl, t_end, perturb_amp, mach, shock_speed, mollifier_width;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> seed_mode, splitting;
  std::optional<int> threads, snapshot_every, diag_every;
  bool entropy_fix{false};
  bool no_filament{false};
  bool contact{false};
};

void apply(const Overrides& o, ExperimentConfig& cfg) {
  if (o.flux) cfg.set("scheme.flux", *o.flux);
  if (o.nx) cfg.nx = *o.nx;
  if (o.ny) cfg.ny = *o.ny;
  if (o.cfl) cfg.scheme.cfl = *o.cfl;
  if (o.t_end) cfg.t_end = *o.t_end;
  if (o.perturb_amp) cfg.perturb_amp = *o.perturb_amp;
  if (o.mach) cfg.mach = *o.mach;
  if (o.shock_speed) cfg.shock_speed = *o.shock_speed;
  if (o.mollifier_width) cfg.mollifier_width = *o.mollifier_width;
  if (o.out) cfg.out_dir = *o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.seed_mode) cfg.set("experiment.seed_mode", *o.seed_mode);
  if (o.splitting) cfg.set("scheme.splitting", *o.splitting);
  if (o.threads) cfg.scheme.threads = *o.threads;
  if (o.snapshot_every) cfg.snapshot_every = *o.snapshot_every;
  if (o.diag_every) cfg.diag_every = *o.diag_every;
  if (o.entropy_fix) cfg.scheme.flux_options.roe_entropy_fix = true;
  if (o.no_filament) cfg.filament = false;
  if (o.contact) cfg.contact = true;
}

void print_result(const ExperimentResult& r) {
  std::cout << r.name << ": " << to_string(r.status) << " after " << r.steps << " steps\n";
  if (!r.message.empty()) std::cout << "  " << r.message << '\n';
  for (const CheckRow& c : r.checks) {
    std::cout << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << " = " << c.measured
              << " (limit " << c.limit << ")\n";
  }
  if (r.checks.empty()) {
    for (const auto& [k, v] : r.metrics) std::cout << "  " << k << " = " << v << '\n';
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shock-capturing experiments on the 2D Euler equations"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::string config_file;
  app.add_option("--config", config_file, "key = value file; flags override it");
  app.add_option("--flux", o.flux, "godunov, roe or hlle");
  app.add_option("--nx", o.nx, "cells in x");
  app.add_option("--ny", o.ny, "cells in y");
  app.add_option("--cfl", o.cfl, "Courant number");
  app.add_option("--t-end", o.t_end, "end time");
  app.add_option("--perturb-amp", o.perturb_amp, "seed / perturbation amplitude");
  app.add_option("--mach", o.mach, "shock Mach number");
  app.add_option("--shock-speed", o.shock_speed, "shock speed");
  app.add_option("--mollifier-width", o.mollifier_width, "delta-source mollifier width");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--seed-mode", o.seed_mode, "odd-even or random");
  app.add_option("--splitting", o.splitting, "unsplit or strang");
  app.add_option("--threads", o.threads, "flux worker threads");
  app.add_option("--snapshot-every", o.snapshot_every, "steps between snapshots (0: first/last)");
  app.add_option("--diag-every", o.diag_every, "steps between diagnostics rows");
  app.add_flag("--entropy-fix", o.entropy_fix, "Harten entropy fix for the Roe flux");
  app.add_flag("--no-filament", o.no_filament, "Elling run without the filament");
  app.add_flag("--contact", o.contact, "contact advection with discontinuous density");

  for (const std::string& name : experiment_names()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  ExperimentConfig cfg;
  cfg.experiment = app.get_subcommands().front()->get_name();
  RunManifest manifest;
  manifest.command = cfg.experiment;
  manifest.started = wall_clock_now();
  std::optional<OutputDirectory> out;

  const auto finish = [&](int code, const std::string& status, const std::string& message) {
    manifest.exit_code = code;
    manifest.status = status;
    manifest.message = message;
    manifest.finished = wall_clock_now();
    manifest.config_echo = cfg.echo();
    if (out) manifest.outputs = out->files();
    manifest.outputs.push_back("manifest.txt");
    try {
      write_manifest(std::filesystem::path(cfg.out_dir) / "manifest.txt", manifest);
    } catch (const std::exception& e) {
      std::cerr << "warning: " << e.what() << '\n';
    }
    return code;
  };

  try {
    if (!config_file.empty()) load_config_file(config_file, cfg);
    cfg.experiment = app.get_subcommands().front()->get_name();
    apply(o, cfg);
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    if (o.out) cfg.out_dir = *o.out;
    return finish(kExitConfig, "config-error", e.what());
  }

  try {
    out.emplace(cfg.out_dir);
    const ExperimentResult r = run_experiment(cfg, &*out);
    manifest.metrics = r.metrics;
    print_result(r);
    if (r.status == RunStatus::Blowup) {
      return finish(kExitBlowup, "blowup", r.message);
    }
    if (!r.ok()) return finish(kExitFailure, "failed-checks", "");
    return finish(0, std::string(to_string(r.status)), "");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return finish(kExitConfig, "config-error", e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return finish(kExitFailure, "error", e.what());
  }
}
