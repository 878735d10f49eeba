#include "carbuncle/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace carbuncle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Primitive variable k (0 rho, 1 u, 2 v, 3 p) over a window, indexed (j, i)
// relative to the window origin.
Eigen::MatrixXd window_values(const FieldSet& fields, const ProbeWindow& w, int k,
                              const GasConstants& g) {
  Eigen::MatrixXd out(w.height(), w.width());
  for (int j = 0; j < w.height(); ++j) {
    for (int i = 0; i < w.width(); ++i) {
      out(j, i) = fields.primitive(w.i0 + i, w.j0 + j, g).as_vector()[k];
    }
  }
  return out;
}

} // namespace

void ProbeWindow::validate(const Grid2D& grid) const {
  if (i0 < 0 || j0 < 0 || i1 > grid.nx || j1 > grid.ny || i0 >= i1 || j0 >= j1) {
    throw std::invalid_argument("probe window is empty or outside the grid");
  }
}

ConstantPressureCheck detect_constant_pressure(const FieldSet& fields, const ProbeWindow& window,
                                               double tol, const GasConstants& g) {
  window.validate(fields.grid());
  const Eigen::MatrixXd p = window_values(fields, window, 3, g);
  const double mean = p.mean();
  const double dev = (p.array() - mean).abs().maxCoeff() / mean;
  return {dev <= tol, dev};
}

double plane_wave_condition_residual(const FieldSet& fields, const ProbeWindow& window, double mu,
                                     const GasConstants& g) {
  window.validate(fields.grid());
  if (window.width() < 3) {
    throw WindowTooSmall("plane-wave residual needs at least 3 cells in x");
  }
  const double dx = fields.grid().dx;
  const double dy = fields.grid().dy;
  const Eigen::MatrixXd p = window_values(fields, window, 3, g);
  const Eigen::MatrixXd v = window_values(fields, window, 2, g);
  const int nx = window.width();
  const int ny = window.height();

  Eigen::MatrixXd r(ny, nx);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double py = 0.0;
      if (ny == 2) {
        py = (p(1, i) - p(0, i)) / dy;
      } else if (ny > 2) {
        if (j == 0) {
          py = (-3.0 * p(0, i) + 4.0 * p(1, i) - p(2, i)) / (2.0 * dy);
        } else if (j == ny - 1) {
          py = (3.0 * p(j, i) - 4.0 * p(j - 1, i) + p(j - 2, i)) / (2.0 * dy);
        } else {
          py = (p(j + 1, i) - p(j - 1, i)) / (2.0 * dy);
        }
      }
      const int c = std::clamp(i, 1, nx - 2);
      const double vxx = (v(j, c + 1) - 2.0 * v(j, c) + v(j, c - 1)) / (dx * dx);
      r(j, i) = py - mu * vxx;
    }
  }
  return (r.array() - r.mean()).abs().maxCoeff();
}

FrontPositions shock_front_positions(const FieldSet& fields, const FrontOptions& options,
                                     const GasConstants& g) {
  const Grid2D& grid = fields.grid();
  const bool from_east = options.upstream == UpstreamSide::East;
  const int up_col = from_east ? grid.nx - 1 : 0;
  const int down_col = from_east ? 0 : grid.nx - 1;

  const auto column_mean = [&](int i) {
    double s = 0.0;
    for (int j = 0; j < grid.ny; ++j) s += fields.primitive(i, j, g).p;
    return s / grid.ny;
  };
  const double p_up = options.p_upstream.value_or(column_mean(up_col));
  const double p_down = options.p_downstream.value_or(column_mean(down_col));
  const double threshold = p_up + options.fraction * (p_down - p_up);
  // Orientation of the jump, so that an expansion front is located as well.
  const double sense = p_down >= p_up ? 1.0 : -1.0;

  FrontPositions out;
  out.x.assign(grid.ny, kNaN);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < grid.ny; ++j) {
    bool found = false;
    double prev_p = 0.0;
    for (int n = 0; n < grid.nx; ++n) {
      const int i = from_east ? grid.nx - 1 - n : n;
      const double p = fields.primitive(i, j, g).p;
      if (sense * (p - threshold) > 0.0) {
        double x = grid.xc(i);
        if (n > 0) {
          const double x_prev = grid.xc(from_east ? i + 1 : i - 1);
          x = x_prev + (threshold - prev_p) / (p - prev_p) * (x - x_prev);
        }
        out.x[j] = x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        found = true;
        break;
      }
      prev_p = p;
    }
    if (!found) {
      if (options.strict) throw NoFrontFound(j);
      out.missing_rows.push_back(j);
    }
  }
  out.distortion = hi >= lo ? hi - lo : 0.0;
  return out;
}

double odd_even_amplitude(const FieldSet& fields, int i0, int i1) {
  const Grid2D& grid = fields.grid();
  if (grid.ny < 2) throw std::invalid_argument("odd-even amplitude needs ny >= 2");
  if (i0 < 0 || i1 > grid.nx || i0 >= i1) {
    throw std::invalid_argument("probe columns outside the grid");
  }
  double amp = 0.0;
  for (int i = i0; i < i1; ++i) {
    for (int j = 0; j + 1 < grid.ny; ++j) {
      amp = std::max(amp, std::abs(fields.cell(i, j + 1)[0] - fields.cell(i, j)[0]));
    }
  }
  return amp;
}

double odd_even_amplitude(const FieldSet& fields) {
  return odd_even_amplitude(fields, 0, fields.grid().nx);
}

double post_shock_noise(const FieldSet& fields, const ProbeWindow& window, const GasConstants& g) {
  window.validate(fields.grid());
  const Eigen::MatrixXd p = window_values(fields, window, 3, g);
  return std::sqrt((p.array() - p.mean()).square().mean());
}

ErrorNorms error_vs_analytic(const FieldSet& fields, const AnalyticSolution& analytic,
                             const ProbeWindow& window, const GasConstants& g) {
  const Grid2D& grid = fields.grid();
  window.validate(grid);
  ErrorNorms out;
  for (int j = window.j0; j < window.j1; ++j) {
    for (int i = window.i0; i < window.i1; ++i) {
      const Eigen::Vector4d err = (fields.primitive(i, j, g).as_vector() -
                                   analytic(grid.xc(i), grid.yc(j), fields.t).as_vector())
                                      .cwiseAbs();
      out.l1 += err * grid.cell_area();
      out.linf = out.linf.cwiseMax(err);
    }
  }
  return out;
}

std::string DiagnosticsReport::csv_header() {
  return "t,front_distortion,odd_even_amplitude,post_shock_noise,pw_residual,l1,linf";
}

std::string DiagnosticsReport::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << t << ',' << front_distortion << ',' << odd_even_amplitude << ',' << post_shock_noise
     << ',' << pw_residual << ',' << (errors ? errors->l1[0] : kNaN) << ','
     << (errors ? errors->linf[0] : kNaN);
  return os.str();
}

DiagnosticsReport make_report(const FieldSet& fields, const DiagnosticsPlan& plan,
                              const GasConstants& g) {
  DiagnosticsReport r;
  r.t = fields.t;
  r.front_distortion = r.odd_even_amplitude = r.post_shock_noise = r.pw_residual = kNaN;
  if (plan.front) {
    FrontOptions opts = *plan.front;
    opts.strict = false;
    FrontPositions f = shock_front_positions(fields, opts, g);
    r.shock_front_x = std::move(f.x);
    r.front_distortion = f.distortion;
  }
  if (plan.odd_even_columns && fields.grid().ny >= 2) {
    r.odd_even_amplitude =
        odd_even_amplitude(fields, plan.odd_even_columns->i0, plan.odd_even_columns->i1);
  }
  if (plan.noise_window) r.post_shock_noise = post_shock_noise(fields, *plan.noise_window, g);
  if (plan.pw_window && plan.pw_window->width() >= 3) {
    r.pw_residual = plane_wave_condition_residual(fields, *plan.pw_window, plan.mu, g);
  }
  if (plan.analytic) {
    r.errors = error_vs_analytic(fields, plan.analytic,
                                 plan.error_window.value_or(ProbeWindow::whole(fields.grid())), g);
  }
  return r;
}

} // namespace carbuncle
