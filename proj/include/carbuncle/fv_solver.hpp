#ifndef CARBUNCLE_FV_SOLVER_HPP
#define CARBUNCLE_FV_SOLVER_HPP

#include "carbuncle/euler.hpp"
#include "carbuncle/riemann.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace carbuncle {

/// Uniform Cartesian grid. Interior cells are indexed i in [0, nx),
/// j in [0, ny); ghost cells extend the index range by `ghost` on every side.
struct Grid2D {
  int nx{1};
  int ny{1};
  double dx{1.0};
  double dy{1.0};
  double x0{0.0};
  double y0{0.0};
  int ghost{1};

  void validate() const;

  double xc(int i) const { return x0 + (i + 0.5) * dx; }
  double yc(int j) const { return y0 + (j + 0.5) * dy; }
  double width() const { return nx * dx; }
  double height() const { return ny * dy; }
  double cell_area() const { return dx * dy; }

  int padded_nx() const { return nx + 2 * ghost; }
  int padded_ny() const { return ny + 2 * ghost; }
  Eigen::Index padded_size() const {
    return static_cast<Eigen::Index>(padded_nx()) * padded_ny();
  }
  /// Row-major position of cell (i, j) in the padded storage.
  Eigen::Index index(int i, int j) const {
    return static_cast<Eigen::Index>(j + ghost) * padded_nx() + (i + ghost);
  }
};

using StateMatrix = Eigen::Matrix<double, 4, Eigen::Dynamic>;

/// Cell-averaged conserved state on a grid, one column per cell (ghosts
/// included), plus the simulation time.
class FieldSet {
public:
  FieldSet() = default;
  explicit FieldSet(const Grid2D& grid, double time = 0.0);

  template <typename Init>
  static FieldSet from_primitive(const Grid2D& grid, Init&& init, const GasConstants& g) {
    FieldSet fields(grid);
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        fields.cell(i, j) = prim_to_cons(PrimitiveState(init(grid.xc(i), grid.yc(j))), g);
      }
    }
    return fields;
  }

  const Grid2D& grid() const { return grid_; }
  const StateMatrix& data() const { return data_; }
  StateMatrix& data() { return data_; }

  auto cell(int i, int j) { return data_.col(grid_.index(i, j)); }
  ConservedState cell(int i, int j) const { return data_.col(grid_.index(i, j)); }
  PrimitiveState primitive(int i, int j, const GasConstants& g) const {
    return cons_to_prim(cell(i, j), g);
  }

  /// Sum of each conserved component over interior cells, accumulated in a
  /// fixed row-major order.
  ConservedState interior_sum() const;

  /// Largest absolute difference between interior cells of two fields on the
  /// same grid.
  double max_abs_difference(const FieldSet& other) const;

  double t{0.0};

private:
  Grid2D grid_;
  StateMatrix data_;
};

enum class BoundaryKind { Outflow, Reflective, Inflow, Periodic };

/// Condition on one edge of the domain. Inflow carries either one state or
/// one state per cell along the edge (south-to-north or west-to-east).
struct EdgeCondition {
  BoundaryKind kind{BoundaryKind::Outflow};
  std::vector<ConservedState> inflow;

  static EdgeCondition outflow() { return {}; }
  static EdgeCondition reflective() { return {BoundaryKind::Reflective, {}}; }
  static EdgeCondition periodic() { return {BoundaryKind::Periodic, {}}; }
  static EdgeCondition fixed(const ConservedState& q) { return {BoundaryKind::Inflow, {q}}; }
  static EdgeCondition profile(std::vector<ConservedState> q) {
    return {BoundaryKind::Inflow, std::move(q)};
  }
};

struct BoundarySpec {
  EdgeCondition west;
  EdgeCondition east;
  EdgeCondition south;
  EdgeCondition north;

  static BoundarySpec all(const EdgeCondition& edge) { return {edge, edge, edge, edge}; }
  void validate(const Grid2D& grid, const GasConstants& g) const;
};

/// Refreshes every ghost layer from the boundary specification.
void apply_boundary(FieldSet& fields, const BoundarySpec& bc);

enum class Splitting { Unsplit, Strang };

struct SchemeConfig {
  FluxKind flux{FluxKind::Godunov};
  double cfl{0.5};
  Splitting splitting{Splitting::Unsplit};
  FluxOptions flux_options;
  /// Worker threads for flux evaluation; results do not depend on it.
  int threads{1};

  void validate() const;
};

/// Largest stable time step: cfl / max over cells of
/// (|u| + c)/dx + (|v| + c)/dy.
double cfl_dt(const FieldSet& fields, double cfl, const GasConstants& g);

/// One first-order conservative update of length dt. Reads only time level n.
/// Throws NonPhysicalState naming the cell if any updated state is invalid.
FieldSet step(const FieldSet& fields, const SchemeConfig& scheme, const BoundarySpec& bc,
              double dt, const GasConstants& g);

enum class RunStatus { Completed, Stopped, Blowup, StepLimit };

std::string_view to_string(RunStatus status);

struct RunOptions {
  double t_end{0.0};
  long max_steps{10'000'000};
  /// Keep a copy of the field every n steps (0 disables; the initial and
  /// final fields are always passed to on_snapshot when it is set).
  int snapshot_every{0};
  bool keep_snapshots{false};
  /// Invoke on_step every n steps (and on the initial and final states).
  int callback_every{1};
  std::function<void(const FieldSet&, long step)> on_snapshot;
  std::function<void(const FieldSet&, long step)> on_step;
  /// Early termination predicate, checked after every step.
  std::function<bool(const FieldSet&, long step)> stop_when;
};

struct RunResult {
  FieldSet final_state;
  std::vector<FieldSet> snapshots;
  long steps{0};
  RunStatus status{RunStatus::Completed};
  double failure_time{0.0};
  std::string failure_message;
};

/// Advances to t_end with dt recomputed every step and the last step clipped
/// to land on t_end. A NonPhysicalState ends the run with status Blowup; the
/// last valid field is returned.
RunResult run(const FieldSet& initial, const SchemeConfig& scheme, const BoundarySpec& bc,
              const RunOptions& options, const GasConstants& g);

} // namespace carbuncle

#endif
