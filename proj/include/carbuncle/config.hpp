#ifndef CARBUNCLE_CONFIG_HPP
#define CARBUNCLE_CONFIG_HPP

#include "carbuncle/fv_solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace carbuncle {

/// How the Quirk duct is seeded: a deterministic odd-even density pattern on
/// the two centre rows, or seeded random density noise on the same rows.
enum class SeedMode { OddEven, Random };

std::string_view to_string(SeedMode mode);
SeedMode parse_seed_mode(std::string_view name);
Splitting parse_splitting(std::string_view name);
std::string_view to_string(Splitting splitting);

/// Everything an experiment needs. Zero grid sizes and a zero end time mean
/// "use the experiment's default".
struct ExperimentConfig {
  std::string experiment;

  int nx{0};
  int ny{0};
  double dx{0.0};
  double dy{0.0};

  SchemeConfig scheme;
  GasConstants gas;

  double t_end{0.0};
  int snapshot_every{0};
  int diag_every{1};

  double mach{6.0};
  double shock_speed{0.0};
  double perturb_amp{1e-6};
  double mollifier_width{0.0};
  std::uint64_t seed{1};
  SeedMode seed_mode{SeedMode::OddEven};
  /// Elling filament on/off.
  bool filament{true};
  /// Contact advection: discontinuous density instead of smooth data.
  bool contact{false};

  std::string out_dir{"out"};

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  /// Applies one "key = value" setting. Keys may be qualified by section,
  /// e.g. "grid.nx"; unqualified keys are looked up by their bare name.
  void set(std::string_view key, std::string_view value);

  /// Canonical "section.key = value" lines, one per setting.
  std::string echo() const;
};

/// Parses line-oriented "key = value" text with optional [section] headers.
/// '#' and ';' start comments. Throws ConfigError naming the line on any
/// malformed or unknown entry.
void load_config(std::istream& in, ExperimentConfig& cfg);
void load_config_file(const std::string& path, ExperimentConfig& cfg);

} // namespace carbuncle

#endif
