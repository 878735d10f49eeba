#ifndef CARBUNCLE_DIAGNOSTICS_HPP
#define CARBUNCLE_DIAGNOSTICS_HPP

#include "carbuncle/fv_solver.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace carbuncle {

/// Half-open rectangle of interior cells [i0, i1) x [j0, j1).
struct ProbeWindow {
  int i0{0}, i1{0};
  int j0{0}, j1{0};

  static ProbeWindow whole(const Grid2D& grid) { return {0, grid.nx, 0, grid.ny}; }
  static ProbeWindow columns(const Grid2D& grid, int i0, int i1) { return {i0, i1, 0, grid.ny}; }

  int width() const { return i1 - i0; }
  int height() const { return j1 - j0; }
  /// Throws std::invalid_argument if empty or not inside the grid.
  void validate(const Grid2D& grid) const;
};

struct ConstantPressureCheck {
  bool constant{false};
  /// max |p - p_mean| / p_mean over the window.
  double max_deviation{0.0};
};

ConstantPressureCheck detect_constant_pressure(const FieldSet& fields, const ProbeWindow& window,
                                               double tol, const GasConstants& g);

/// Deviation of r = d_y p - mu d_xx v from a spatially constant value:
/// max |r - mean r| over the window.
///
/// Stencils use window cells only. d_y p is the three-point central
/// difference inside, the second-order one-sided formula on the first and
/// last rows (two-point with two rows, zero with one). d_xx v is the
/// three-point formula, shifted inward by one cell on the first and last
/// columns. Throws WindowTooSmall with fewer than 3 columns.
double plane_wave_condition_residual(const FieldSet& fields, const ProbeWindow& window, double mu,
                                     const GasConstants& g);

enum class UpstreamSide { West, East };

struct FrontOptions {
  /// Side the unshocked gas sits on; each row is scanned from there.
  UpstreamSide upstream{UpstreamSide::East};
  /// Front where p first exceeds p_up + fraction (p_down - p_up).
  double fraction{0.5};
  /// Reference pressures. When absent they are the mean pressure of the
  /// first and last column on the respective side.
  std::optional<double> p_upstream;
  std::optional<double> p_downstream;
  /// Throw NoFrontFound for a row without a crossing instead of skipping it.
  bool strict{true};
};

struct FrontPositions {
  /// Front position per row; NaN for skipped rows.
  std::vector<double> x;
  std::vector<int> missing_rows;
  /// max - min over rows with a front; 0 when fewer than one was found.
  double distortion{0.0};
};

FrontPositions shock_front_positions(const FieldSet& fields, const FrontOptions& options,
                                     const GasConstants& g);

/// max over columns [i0, i1) and rows of |rho(i, j+1) - rho(i, j)|.
double odd_even_amplitude(const FieldSet& fields, int i0, int i1);
double odd_even_amplitude(const FieldSet& fields);

/// Root-mean-square deviation of the pressure from its window mean.
double post_shock_noise(const FieldSet& fields, const ProbeWindow& window, const GasConstants& g);

using AnalyticSolution = std::function<PrimitiveState(double x, double y, double t)>;

/// Norms of (rho, u, v, p) minus the analytic solution sampled at cell
/// centres at fields.t. L1 sums |error| times the cell area.
struct ErrorNorms {
  Eigen::Vector4d l1{Eigen::Vector4d::Zero()};
  Eigen::Vector4d linf{Eigen::Vector4d::Zero()};
};

ErrorNorms error_vs_analytic(const FieldSet& fields, const AnalyticSolution& analytic,
                             const ProbeWindow& window, const GasConstants& g);

struct DiagnosticsReport {
  double t{0.0};
  std::vector<double> shock_front_x;
  double front_distortion{0.0};
  double odd_even_amplitude{0.0};
  double post_shock_noise{0.0};
  double pw_residual{0.0};
  std::optional<ErrorNorms> errors;

  static std::string csv_header();
  /// Density norms go into the l1 / linf columns; NaN marks a metric that
  /// was not evaluated.
  std::string csv_row() const;
};

/// Which metrics to evaluate and where.
struct DiagnosticsPlan {
  std::optional<FrontOptions> front;
  std::optional<ProbeWindow> odd_even_columns;
  std::optional<ProbeWindow> noise_window;
  std::optional<ProbeWindow> pw_window;
  double mu{1.0};
  AnalyticSolution analytic;
  std::optional<ProbeWindow> error_window;
};

/// Evaluates the plan on one field. Metrics that are not requested, or whose
/// window is too small, are reported as NaN.
DiagnosticsReport make_report(const FieldSet& fields, const DiagnosticsPlan& plan,
                              const GasConstants& g);

} // namespace carbuncle

#endif
