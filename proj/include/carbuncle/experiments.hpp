#ifndef CARBUNCLE_EXPERIMENTS_HPP
#define CARBUNCLE_EXPERIMENTS_HPP

#include "carbuncle/config.hpp"
#include "carbuncle/diagnostics.hpp"
#include "carbuncle/output.hpp"
#include "carbuncle/perturbation.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace carbuncle {

/// One line of the perturbation-theory check table.
struct CheckRow {
  std::string name;
  double measured{0.0};
  double limit{0.0};
  bool pass{false};
};

struct ExperimentResult {
  std::string name;
  RunStatus status{RunStatus::Completed};
  double failure_time{0.0};
  std::string message;
  long steps{0};
  FieldSet final_state;
  std::vector<DiagnosticsReport> series;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<CheckRow> checks;

  /// Throws std::out_of_range for an unknown metric.
  double metric(std::string_view key) const;
  bool has_metric(std::string_view key) const;
  void set_metric(std::string key, double value);
  /// False if the run blew up or any check failed.
  bool ok() const;
};

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Dispatches on cfg.experiment. `out` may be null, in which case nothing is
/// written to disk.
ExperimentResult run_experiment(const ExperimentConfig& cfg, OutputDirectory* out = nullptr);

/// Shock tube on [0, 1] with the standard Sod data, compared with the exact
/// fan. Metrics: l1_rho, linf_rho.
ExperimentResult exp_sod(const ExperimentConfig& cfg, OutputDirectory* out = nullptr);

/// Normal shock of the configured Mach number moving at shock_speed, with
/// the downstream density multiplied by 1 + perturb_amp sin(2 pi y / L).
/// Odd-even amplitude and pressure noise are probed five cells behind the
/// shock. Metrics: max_field_change, odd_even_growth, noise_growth (against
/// perturb_amp * p_downstream), max_noise. Throws ConfigError unless
/// |shock_speed| <= 0.05 c upstream.
ExperimentResult exp_stationary_shock(const ExperimentConfig& cfg, OutputDirectory* out = nullptr);

/// Shock running down a duct into gas at rest, seeded on the two centre
/// rows. Metrics: odd_even_initial, odd_even_max, odd_even_amplification,
/// max_front_distortion (in cells), blowup.
ExperimentResult exp_quirk_duct(const ExperimentConfig& cfg, OutputDirectory* out = nullptr);

/// Steady shock with a one-cell row of gas with zero normal velocity kept
/// upstream of it. Metrics: max_front_distortion (in cells),
/// final_front_distortion, max_abs_v, max_field_change, blowup.
ExperimentResult exp_elling_filament(const ExperimentConfig& cfg, OutputDirectory* out = nullptr);

/// Constant-pressure region with tangential velocity v(x), compared with the
/// analytic solution. Metrics: l1_rho, linf_rho, max_pressure_deviation,
/// upwind_difference, contact_width (cells, contact runs only).
ExperimentResult exp_contact_advection(const ExperimentConfig& cfg,
                                       OutputDirectory* out = nullptr);

/// Property checks of the linearised theory, reported as a table.
ExperimentResult exp_perturbation_theory(const ExperimentConfig& cfg,
                                         OutputDirectory* out = nullptr);

/// Runs the Quirk duct and the Elling filament for every flux, in parallel,
/// each in its own subdirectory of `out`. Metrics are prefixed with
/// "<experiment>.<flux>.".
ExperimentResult exp_sweep(const ExperimentConfig& cfg, OutputDirectory* out = nullptr);

/// Initial state of the contact-advection experiment.
ContactProfile contact_profile(bool discontinuous);

} // namespace carbuncle

#endif
