#include "carbuncle/fv_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace carbuncle {

void Grid2D::validate() const {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("grid needs at least one cell in each direction");
  }
  if (!(dx > 0.0) || !(dy > 0.0)) {
    throw std::invalid_argument("grid spacings must be positive");
  }
  if (ghost < 1) {
    throw std::invalid_argument("ghost layer width must be at least 1");
  }
}

FieldSet::FieldSet(const Grid2D& grid, double time)
    : t(time), grid_(grid), data_(4, grid.padded_size()) {
  grid_.validate();
  data_.setZero();
}

ConservedState FieldSet::interior_sum() const {
  ConservedState sum = ConservedState::Zero();
  for (int j = 0; j < grid_.ny; ++j) {
    for (int i = 0; i < grid_.nx; ++i) {
      sum += data_.col(grid_.index(i, j));
    }
  }
  return sum;
}

double FieldSet::max_abs_difference(const FieldSet& other) const {
  double diff = 0.0;
  for (int j = 0; j < grid_.ny; ++j) {
    for (int i = 0; i < grid_.nx; ++i) {
      diff = std::max(diff, (cell(i, j) - other.cell(i, j)).cwiseAbs().maxCoeff());
    }
  }
  return diff;
}

void BoundarySpec::validate(const Grid2D& grid, const GasConstants& g) const {
  if ((west.kind == BoundaryKind::Periodic) != (east.kind == BoundaryKind::Periodic) ||
      (south.kind == BoundaryKind::Periodic) != (north.kind == BoundaryKind::Periodic)) {
    throw std::invalid_argument("periodic boundaries must be paired");
  }
  auto check = [&](const EdgeCondition& edge, int length) {
    if (edge.kind != BoundaryKind::Inflow) {
      return;
    }
    if (edge.inflow.size() != 1 && static_cast<int>(edge.inflow.size()) != length) {
      throw std::invalid_argument("inflow profile length does not match the edge");
    }
    for (const auto& q : edge.inflow) {
      cons_to_prim(q, g);
    }
  };
  check(west, grid.ny);
  check(east, grid.ny);
  check(south, grid.nx);
  check(north, grid.nx);
}

namespace {

ConservedState mirrored(const ConservedState& q, int momentum_component) {
  ConservedState m = q;
  m[momentum_component] = -m[momentum_component];
  return m;
}

const ConservedState& inflow_state(const EdgeCondition& edge, int k) {
  return edge.inflow.size() == 1 ? edge.inflow.front() : edge.inflow[k];
}

void fill_x_edges(FieldSet& f, const BoundarySpec& bc) {
  const Grid2D& grid = f.grid();
  for (int j = 0; j < grid.ny; ++j) {
    for (int layer = 1; layer <= grid.ghost; ++layer) {
      const int gw = -layer;
      const int ge = grid.nx - 1 + layer;
      switch (bc.west.kind) {
      case BoundaryKind::Outflow:
        f.cell(gw, j) = f.cell(0, j);
        break;
      case BoundaryKind::Reflective:
        f.cell(gw, j) = mirrored(f.cell(layer - 1, j), 1);
        break;
      case BoundaryKind::Inflow:
        f.cell(gw, j) = inflow_state(bc.west, j);
        break;
      case BoundaryKind::Periodic:
        f.cell(gw, j) = f.cell(grid.nx - layer, j);
        break;
      }
      switch (bc.east.kind) {
      case BoundaryKind::Outflow:
        f.cell(ge, j) = f.cell(grid.nx - 1, j);
        break;
      case BoundaryKind::Reflective:
        f.cell(ge, j) = mirrored(f.cell(grid.nx - layer, j), 1);
        break;
      case BoundaryKind::Inflow:
        f.cell(ge, j) = inflow_state(bc.east, j);
        break;
      case BoundaryKind::Periodic:
        f.cell(ge, j) = f.cell(layer - 1, j);
        break;
      }
    }
  }
}

// Runs over the full padded width so that corner ghosts are filled too.
void fill_y_edges(FieldSet& f, const BoundarySpec& bc) {
  const Grid2D& grid = f.grid();
  for (int i = -grid.ghost; i < grid.nx + grid.ghost; ++i) {
    const int k = std::clamp(i, 0, grid.nx - 1);
    for (int layer = 1; layer <= grid.ghost; ++layer) {
      const int gs = -layer;
      const int gn = grid.ny - 1 + layer;
      switch (bc.south.kind) {
      case BoundaryKind::Outflow:
        f.cell(i, gs) = f.cell(i, 0);
        break;
      case BoundaryKind::Reflective:
        f.cell(i, gs) = mirrored(f.cell(i, layer - 1), 2);
        break;
      case BoundaryKind::Inflow:
        f.cell(i, gs) = inflow_state(bc.south, k);
        break;
      case BoundaryKind::Periodic:
        f.cell(i, gs) = f.cell(i, grid.ny - layer);
        break;
      }
      switch (bc.north.kind) {
      case BoundaryKind::Outflow:
        f.cell(i, gn) = f.cell(i, grid.ny - 1);
        break;
      case BoundaryKind::Reflective:
        f.cell(i, gn) = mirrored(f.cell(i, grid.ny - layer), 2);
        break;
      case BoundaryKind::Inflow:
        f.cell(i, gn) = inflow_state(bc.north, k);
        break;
      case BoundaryKind::Periodic:
        f.cell(i, gn) = f.cell(i, layer - 1);
        break;
      }
    }
  }
}

// Splits [0, count) into contiguous chunks, one per worker. Each index is
// written by exactly one worker so the result is independent of `threads`.
template <typename Body> void parallel_for(int count, int threads, Body&& body) {
  threads = std::clamp(threads, 1, std::max(count, 1));
  if (threads == 1) {
    for (int k = 0; k < count; ++k) {
      body(k);
    }
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    const int begin = static_cast<int>(static_cast<long>(count) * w / threads);
    const int end = static_cast<int>(static_cast<long>(count) * (w + 1) / threads);
    workers.emplace_back([begin, end, &body] {
      for (int k = begin; k < end; ++k) {
        body(k);
      }
    });
  }
}

std::vector<PrimitiveState> padded_primitives(const FieldSet& f, const GasConstants& g) {
  const Grid2D& grid = f.grid();
  std::vector<PrimitiveState> w(static_cast<std::size_t>(grid.padded_size()));
  for (int j = -grid.ghost; j < grid.ny + grid.ghost; ++j) {
    for (int i = -grid.ghost; i < grid.nx + grid.ghost; ++i) {
      try {
        w[static_cast<std::size_t>(grid.index(i, j))] = f.primitive(i, j, g);
      } catch (const NonPhysicalState& e) {
        throw NonPhysicalState(e.what(), i, j);
      }
    }
  }
  return w;
}

enum class Sweep { X, Y, Both };

FieldSet update(const FieldSet& fields, const SchemeConfig& scheme, const BoundarySpec& bc,
                double dt, const GasConstants& g, Sweep sweep) {
  FieldSet work = fields;
  apply_boundary(work, bc);
  const Grid2D& grid = work.grid();
  const std::vector<PrimitiveState> w = padded_primitives(work, g);
  auto prim = [&](int i, int j) -> const PrimitiveState& {
    return w[static_cast<std::size_t>(grid.index(i, j))];
  };

  const int nx = grid.nx;
  const int ny = grid.ny;
  const bool do_x = sweep != Sweep::Y;
  const bool trivial_y = ny == 1 && bc.south.kind != BoundaryKind::Inflow &&
                         bc.north.kind != BoundaryKind::Inflow &&
                         bc.south.kind != BoundaryKind::Reflective &&
                         bc.north.kind != BoundaryKind::Reflective;
  const bool do_y = sweep != Sweep::X && !trivial_y;

  const UnitNormal nx_hat = UnitNormal::x();
  const UnitNormal ny_hat = UnitNormal::y();
  std::vector<FluxVector> fx;
  std::vector<FluxVector> fy;
  if (do_x) {
    fx.resize(static_cast<std::size_t>(nx + 1) * ny);
    parallel_for(ny, scheme.threads, [&](int j) {
      for (int i = 0; i <= nx; ++i) {
        fx[static_cast<std::size_t>(j) * (nx + 1) + i] =
            numerical_flux(scheme.flux, prim(i - 1, j), prim(i, j), nx_hat, g,
                           scheme.flux_options);
      }
    });
  }
  if (do_y) {
    fy.resize(static_cast<std::size_t>(ny + 1) * nx);
    parallel_for(ny + 1, scheme.threads, [&](int j) {
      for (int i = 0; i < nx; ++i) {
        fy[static_cast<std::size_t>(j) * nx + i] =
            numerical_flux(scheme.flux, prim(i, j - 1), prim(i, j), ny_hat, g,
                           scheme.flux_options);
      }
    });
  }

  FieldSet next = work;
  next.t = fields.t + dt;
  const double lx = dt / grid.dx;
  const double ly = dt / grid.dy;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      auto q = next.cell(i, j);
      if (do_x) {
        const std::size_t k = static_cast<std::size_t>(j) * (nx + 1) + i;
        q -= lx * (fx[k + 1] - fx[k]);
      }
      if (do_y) {
        const std::size_t k = static_cast<std::size_t>(j) * nx + i;
        q -= ly * (fy[k + nx] - fy[k]);
      }
      const ConservedState updated = q;
      if (!(updated.allFinite())) {
        throw NonPhysicalState("non-finite state", i, j);
      }
      try {
        cons_to_prim(updated, g);
      } catch (const NonPhysicalState& e) {
        throw NonPhysicalState(e.what(), i, j);
      }
    }
  }
  return next;
}

} // namespace

void apply_boundary(FieldSet& fields, const BoundarySpec& bc) {
  fill_x_edges(fields, bc);
  fill_y_edges(fields, bc);
}

void SchemeConfig::validate() const {
  if (!(cfl > 0.0) || cfl > 1.0) {
    throw std::invalid_argument("CFL number must lie in (0, 1]");
  }
  if (threads < 1) {
    throw std::invalid_argument("thread count must be positive");
  }
}

double cfl_dt(const FieldSet& fields, double cfl, const GasConstants& g) {
  const Grid2D& grid = fields.grid();
  double rate = 0.0;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const PrimitiveState w = fields.primitive(i, j, g);
      const double c = sound_speed(w, g);
      rate = std::max(rate, (std::abs(w.u) + c) / grid.dx + (std::abs(w.v) + c) / grid.dy);
    }
  }
  return cfl / rate;
}

FieldSet step(const FieldSet& fields, const SchemeConfig& scheme, const BoundarySpec& bc,
              double dt, const GasConstants& g) {
  if (scheme.splitting == Splitting::Unsplit) {
    return update(fields, scheme, bc, dt, g, Sweep::Both);
  }
  FieldSet half = update(fields, scheme, bc, 0.5 * dt, g, Sweep::X);
  FieldSet full = update(half, scheme, bc, dt, g, Sweep::Y);
  FieldSet next = update(full, scheme, bc, 0.5 * dt, g, Sweep::X);
  next.t = fields.t + dt;
  return next;
}

std::string_view to_string(RunStatus status) {
  switch (status) {
  case RunStatus::Completed:
    return "completed";
  case RunStatus::Stopped:
    return "stopped";
  case RunStatus::Blowup:
    return "blowup";
  case RunStatus::StepLimit:
    return "step-limit";
  }
  return "unknown";
}

RunResult run(const FieldSet& initial, const SchemeConfig& scheme, const BoundarySpec& bc,
              const RunOptions& options, const GasConstants& g) {
  scheme.validate();
  bc.validate(initial.grid(), g);

  RunResult result;
  result.final_state = initial;
  FieldSet& current = result.final_state;
  auto snapshot = [&](long n) {
    if (options.keep_snapshots) {
      result.snapshots.push_back(current);
    }
    if (options.on_snapshot) {
      options.on_snapshot(current, n);
    }
  };
  snapshot(0);
  if (options.on_step) {
    options.on_step(current, 0);
  }

  // Relative guard so that round-off in the accumulated time does not
  // produce a spurious sliver step at the end.
  const double eps = 1e-14 * std::max(1.0, std::abs(options.t_end));
  long n = 0;
  bool reported = true;
  while (current.t < options.t_end - eps) {
    if (n >= options.max_steps) {
      result.status = RunStatus::StepLimit;
      break;
    }
    try {
      double dt = cfl_dt(current, scheme.cfl, g);
      if (current.t + dt > options.t_end) {
        dt = options.t_end - current.t;
      }
      FieldSet next = step(current, scheme, bc, dt, g);
      if (options.t_end - next.t <= eps) {
        next.t = options.t_end;
      }
      current = std::move(next);
    } catch (const NonPhysicalState& e) {
      result.status = RunStatus::Blowup;
      result.failure_time = current.t;
      result.failure_message = e.what();
      break;
    }
    ++n;
    reported = false;
    if (options.snapshot_every > 0 && n % options.snapshot_every == 0) {
      snapshot(n);
    }
    if (options.on_step && options.callback_every > 0 && n % options.callback_every == 0) {
      options.on_step(current, n);
      reported = true;
    }
    if (options.stop_when && options.stop_when(current, n)) {
      result.status = RunStatus::Stopped;
      break;
    }
  }
  result.steps = n;
  if (n > 0) {
    if (options.on_step && !reported) {
      options.on_step(current, n);
    }
    if (options.snapshot_every <= 0 || n % options.snapshot_every != 0) {
      snapshot(n);
    }
  }
  return result;
}

} // namespace carbuncle
