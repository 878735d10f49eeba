#include "carbuncle/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace carbuncle {
namespace {

struct WaveCurve {
  double value;
  double derivative;
};

// Change in normal velocity across the 1- or 3-wave connecting a state with
// pressure p to the star pressure (Toro's f_K).
WaveCurve pressure_function(double p, const PrimitiveState& w, double c,
                            const GasConstants& g) {
  const double gamma = g.gamma;
  if (p > w.p) {
    const double A = 2.0 / ((gamma + 1.0) * w.rho);
    const double B = (gamma - 1.0) / (gamma + 1.0) * w.p;
    const double root = std::sqrt(A / (p + B));
    return {(p - w.p) * root, root * (1.0 - 0.5 * (p - w.p) / (B + p))};
  }
  const double z = (gamma - 1.0) / (2.0 * gamma);
  const double ratio = p / w.p;
  return {2.0 * c / (gamma - 1.0) * (std::pow(ratio, z) - 1.0),
          std::pow(ratio, -(gamma + 1.0) / (2.0 * gamma)) / (w.rho * c)};
}

double star_density(double p_star, const PrimitiveState& w, const GasConstants& g) {
  const double ratio = p_star / w.p;
  if (p_star > w.p) {
    const double mu = (g.gamma - 1.0) / (g.gamma + 1.0);
    return w.rho * (ratio + mu) / (mu * ratio + 1.0);
  }
  return w.rho * std::pow(ratio, 1.0 / g.gamma);
}

double shock_speed_factor(double p_star, double p, const GasConstants& g) {
  return std::sqrt((g.gamma + 1.0) / (2.0 * g.gamma) * p_star / p +
                   (g.gamma - 1.0) / (2.0 * g.gamma));
}

double solve_star_pressure(const PrimitiveState& l, const PrimitiveState& r,
                           double cl, double cr, const GasConstants& g,
                           const ExactSolverOptions& options, int& iterations) {
  const double du = r.u - l.u;
  auto f = [&](double p) {
    const WaveCurve fl = pressure_function(p, l, cl, g);
    const WaveCurve fr = pressure_function(p, r, cr, g);
    return WaveCurve{fl.value + fr.value + du, fl.derivative + fr.derivative};
  };

  // Two-rarefaction guess is exact when both nonlinear waves are rarefactions.
  const double z = (g.gamma - 1.0) / (2.0 * g.gamma);
  double p = std::pow((cl + cr - 0.5 * (g.gamma - 1.0) * du) /
                          (cl / std::pow(l.p, z) + cr / std::pow(r.p, z)),
                      1.0 / z);
  if (!(p > 0.0) || !std::isfinite(p)) {
    p = 0.5 * (l.p + r.p);
  }

  for (int k = 0; k < options.newton_iterations; ++k) {
    const WaveCurve fp = f(p);
    double next = p - fp.value / fp.derivative;
    if (!(next > 0.0)) {
      next = 0.5 * p;
    }
    ++iterations;
    const double change = std::abs(next - p) / (0.5 * (next + p));
    p = next;
    if (change < options.tolerance) {
      return p;
    }
  }

  // f is monotonically increasing in p with f(0+) < 0 for non-vacuum data.
  double lo = 0.0;
  double hi = std::max({l.p, r.p, 1e-300});
  int expansions = 0;
  while (f(hi).value < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 2000 || !std::isfinite(hi)) {
      throw NoConvergence("star pressure could not be bracketed");
    }
  }
  for (int k = 0; k < 400; ++k) {
    ++iterations;
    const double mid = 0.5 * (lo + hi);
    if (f(mid).value < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= options.tolerance * hi) {
      return 0.5 * (lo + hi);
    }
  }
  throw NoConvergence("star pressure iteration did not converge");
}

double velocity_jump(double p_a, double rho_a, double p_b, double rho_b) {
  return std::sqrt(std::max(0.0, (p_b - p_a) * (1.0 / rho_a - 1.0 / rho_b)));
}

} // namespace

std::string_view to_string(WaveKind kind) {
  switch (kind) {
  case WaveKind::Shock:
    return "shock";
  case WaveKind::Rarefaction:
    return "rarefaction";
  case WaveKind::Contact:
    return "contact";
  }
  return "unknown";
}

int RiemannFan::active_waves(double rel_tol) const {
  int count = 0;
  if (std::abs(p_star - left.p) > rel_tol * left.p) {
    ++count;
  }
  if (std::abs(rho_star_right - rho_star_left) > rel_tol * rho_star_left ||
      std::abs(right.v - left.v) > rel_tol * (1.0 + std::abs(left.v))) {
    ++count;
  }
  if (std::abs(right.p - p_star) > rel_tol * p_star) {
    ++count;
  }
  return count;
}

RiemannFan solve_exact(const PrimitiveState& left, const PrimitiveState& right,
                       const GasConstants& g, const ExactSolverOptions& options) {
  if (!is_physical(left) || !is_physical(right)) {
    throw NonPhysicalState("Riemann data must have positive density and pressure");
  }
  const double cl = sound_speed(left, g);
  const double cr = sound_speed(right, g);
  if (2.0 * (cl + cr) / (g.gamma - 1.0) <= right.u - left.u) {
    throw VacuumFormation("Riemann data generate vacuum");
  }

  RiemannFan fan;
  fan.left = left;
  fan.right = right;
  if (left.p == right.p && left.u == right.u) {
    // Pure contact (or identical states): the star state is known exactly.
    fan.p_star = left.p;
    fan.u_star = left.u;
  } else {
    fan.p_star = solve_star_pressure(left, right, cl, cr, g, options, fan.iterations);
    const double fl = pressure_function(fan.p_star, left, cl, g).value;
    const double fr = pressure_function(fan.p_star, right, cr, g).value;
    fan.u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
  }
  fan.rho_star_left = star_density(fan.p_star, left, g);
  fan.rho_star_right = star_density(fan.p_star, right, g);
  fan.s2 = fan.u_star;

  if (fan.p_star > left.p) {
    fan.wave1 = WaveKind::Shock;
    fan.s1_head = fan.s1_tail =
        left.u - cl * shock_speed_factor(fan.p_star, left.p, g);
  } else {
    fan.wave1 = WaveKind::Rarefaction;
    fan.s1_head = left.u - cl;
    fan.s1_tail = fan.u_star - std::sqrt(g.gamma * fan.p_star / fan.rho_star_left);
  }
  if (fan.p_star > right.p) {
    fan.wave3 = WaveKind::Shock;
    fan.s3_head = fan.s3_tail =
        right.u + cr * shock_speed_factor(fan.p_star, right.p, g);
  } else {
    fan.wave3 = WaveKind::Rarefaction;
    fan.s3_head = right.u + cr;
    fan.s3_tail = fan.u_star + std::sqrt(g.gamma * fan.p_star / fan.rho_star_right);
  }
  return fan;
}

PrimitiveState sample_fan(const RiemannFan& fan, double xi, const GasConstants& g) {
  const double gamma = g.gamma;
  const double gm1 = gamma - 1.0;
  const double gp1 = gamma + 1.0;
  if (xi <= fan.s2) {
    const PrimitiveState& l = fan.left;
    if (fan.wave1 == WaveKind::Shock) {
      return xi < fan.s1_head ? l : fan.star_left();
    }
    if (xi < fan.s1_head) {
      return l;
    }
    if (xi > fan.s1_tail) {
      return fan.star_left();
    }
    const double cl = sound_speed(l, g);
    const double c = 2.0 / gp1 * (cl + 0.5 * gm1 * (l.u - xi));
    const double ratio = c / cl;
    return {l.rho * std::pow(ratio, 2.0 / gm1), 2.0 / gp1 * (cl + 0.5 * gm1 * l.u + xi),
            l.v, l.p * std::pow(ratio, 2.0 * gamma / gm1)};
  }
  const PrimitiveState& r = fan.right;
  if (fan.wave3 == WaveKind::Shock) {
    return xi > fan.s3_head ? r : fan.star_right();
  }
  if (xi > fan.s3_head) {
    return r;
  }
  if (xi < fan.s3_tail) {
    return fan.star_right();
  }
  const double cr = sound_speed(r, g);
  const double c = 2.0 / gp1 * (cr - 0.5 * gm1 * (r.u - xi));
  const double ratio = c / cr;
  return {r.rho * std::pow(ratio, 2.0 / gm1), 2.0 / gp1 * (-cr + 0.5 * gm1 * r.u + xi),
          r.v, r.p * std::pow(ratio, 2.0 * gamma / gm1)};
}

WaveStrengths wave_strengths(const PrimitiveState& left, const PrimitiveState& right,
                             const GasConstants& g) {
  const RiemannFan fan = solve_exact(left, right, g);
  return {fan.p_star / left.p - 1.0, fan.rho_star_right / fan.rho_star_left - 1.0,
          right.p / fan.p_star - 1.0, right.v - left.v};
}

PrimitiveState apply_wave_strengths(const PrimitiveState& left, const WaveStrengths& eps,
                                    const GasConstants& g) {
  const double gamma = g.gamma;
  const double p_star = left.p * (1.0 + eps.eps1);
  const double rho_star_left = star_density(p_star, left, g);
  double u_star = 0.0;
  if (p_star > left.p) {
    u_star = left.u - velocity_jump(left.p, left.rho, p_star, rho_star_left);
  } else {
    const double cl = sound_speed(left, g);
    const double cs = std::sqrt(gamma * p_star / rho_star_left);
    u_star = left.u + 2.0 * (cl - cs) / (gamma - 1.0);
  }

  const PrimitiveState star_right{rho_star_left * (1.0 + eps.eps2), u_star,
                                  left.v + eps.shear, p_star};
  const double p_right = p_star * (1.0 + eps.eps3);
  // The Hugoniot and isentrope relations are symmetric in the two states, but
  // the branch is set by the wave: a 3-shock has p_right below p_star.
  const double ratio = p_right / p_star;
  const double mu = (gamma - 1.0) / (gamma + 1.0);
  const double rho_right = p_star > p_right
                               ? star_right.rho * (ratio + mu) / (mu * ratio + 1.0)
                               : star_right.rho * std::pow(ratio, 1.0 / gamma);
  double u_right = 0.0;
  if (p_star > p_right) {
    u_right = u_star - velocity_jump(p_right, rho_right, p_star, star_right.rho);
  } else {
    const double cs = std::sqrt(gamma * p_star / star_right.rho);
    const double cr = std::sqrt(gamma * p_right / rho_right);
    u_right = u_star - 2.0 * (cs - cr) / (gamma - 1.0);
  }
  return {rho_right, u_right, star_right.v, p_right};
}

std::string_view to_string(FluxKind kind) {
  switch (kind) {
  case FluxKind::Godunov:
    return "godunov";
  case FluxKind::Roe:
    return "roe";
  case FluxKind::Hlle:
    return "hlle";
  }
  return "unknown";
}

FluxKind parse_flux_kind(std::string_view name) {
  if (name == "godunov" || name == "exact-godunov" || name == "exact") {
    return FluxKind::Godunov;
  }
  if (name == "roe") {
    return FluxKind::Roe;
  }
  if (name == "hlle") {
    return FluxKind::Hlle;
  }
  throw std::invalid_argument("unknown flux '" + std::string(name) + "'");
}

FluxVector godunov_flux(const PrimitiveState& left, const PrimitiveState& right,
                        const UnitNormal& n, const GasConstants& g,
                        const ExactSolverOptions& options) {
  const PrimitiveState l = to_normal_frame(left, n);
  const PrimitiveState r = to_normal_frame(right, n);
  if (l == r) {
    return rotate_from_normal_frame(flux_x(l, g), n);
  }
  const RiemannFan fan = solve_exact(l, r, g, options);
  return rotate_from_normal_frame(flux_x(sample_fan(fan, 0.0, g), g), n);
}

namespace {

struct RoeAverage {
  double rho;
  double u;
  double v;
  double H;
  double c;
};

RoeAverage roe_average(const PrimitiveState& l, const PrimitiveState& r,
                       const GasConstants& g) {
  const double sl = std::sqrt(l.rho);
  const double sr = std::sqrt(r.rho);
  const double inv = 1.0 / (sl + sr);
  RoeAverage avg;
  avg.rho = sl * sr;
  avg.u = (sl * l.u + sr * r.u) * inv;
  avg.v = (sl * l.v + sr * r.v) * inv;
  avg.H = (sl * total_enthalpy(l, g) + sr * total_enthalpy(r, g)) * inv;
  const double c2 = (g.gamma - 1.0) * (avg.H - 0.5 * (avg.u * avg.u + avg.v * avg.v));
  avg.c = std::sqrt(std::max(c2, 0.0));
  return avg;
}

} // namespace

std::pair<double, double> hlle_wave_bounds(const PrimitiveState& left,
                                           const PrimitiveState& right,
                                           const UnitNormal& n, const GasConstants& g) {
  const PrimitiveState l = to_normal_frame(left, n);
  const PrimitiveState r = to_normal_frame(right, n);
  const RoeAverage avg = roe_average(l, r, g);
  const double b_minus = std::min({l.u - sound_speed(l, g), avg.u - avg.c, 0.0});
  const double b_plus = std::max({r.u + sound_speed(r, g), avg.u + avg.c, 0.0});
  return {b_minus, b_plus};
}

FluxVector hlle_flux(const PrimitiveState& left, const PrimitiveState& right,
                     const UnitNormal& n, const GasConstants& g) {
  const PrimitiveState l = to_normal_frame(left, n);
  const PrimitiveState r = to_normal_frame(right, n);
  const FluxVector fl = flux_x(l, g);
  if (l == r) {
    return rotate_from_normal_frame(fl, n);
  }
  const auto [bm, bp] = hlle_wave_bounds(left, right, n, g);
  const FluxVector fr = flux_x(r, g);
  const ConservedState dq = prim_to_cons(r, g) - prim_to_cons(l, g);
  const FluxVector f = (bp * fl - bm * fr + bp * bm * dq) / (bp - bm);
  return rotate_from_normal_frame(f, n);
}

FluxVector roe_flux(const PrimitiveState& left, const PrimitiveState& right,
                    const UnitNormal& n, const GasConstants& g, bool entropy_fix,
                    double fix_fraction) {
  const PrimitiveState l = to_normal_frame(left, n);
  const PrimitiveState r = to_normal_frame(right, n);
  const FluxVector fl = flux_x(l, g);
  if (l == r) {
    return rotate_from_normal_frame(fl, n);
  }
  const FluxVector fr = flux_x(r, g);
  const RoeAverage a = roe_average(l, r, g);

  const double drho = r.rho - l.rho;
  const double du = r.u - l.u;
  const double dv = r.v - l.v;
  const double dp = r.p - l.p;
  const double c2 = a.c * a.c;

  Eigen::Vector4d alpha;
  alpha << (dp - a.rho * a.c * du) / (2.0 * c2), drho - dp / c2, a.rho * dv,
      (dp + a.rho * a.c * du) / (2.0 * c2);

  Eigen::Vector4d lambda(a.u - a.c, a.u, a.u, a.u + a.c);
  lambda = lambda.cwiseAbs();
  if (entropy_fix) {
    const double delta = fix_fraction * a.c;
    for (int k : {0, 3}) {
      if (lambda[k] < delta) {
        lambda[k] = (lambda[k] * lambda[k] + delta * delta) / (2.0 * delta);
      }
    }
  }

  Eigen::Matrix4d R;
  R.col(0) << 1.0, a.u - a.c, a.v, a.H - a.u * a.c;
  R.col(1) << 1.0, a.u, a.v, 0.5 * (a.u * a.u + a.v * a.v);
  R.col(2) << 0.0, 0.0, 1.0, a.v;
  R.col(3) << 1.0, a.u + a.c, a.v, a.H + a.u * a.c;

  const FluxVector f = 0.5 * (fl + fr) - 0.5 * R * lambda.cwiseProduct(alpha);
  return rotate_from_normal_frame(f, n);
}

FluxVector numerical_flux(FluxKind kind, const PrimitiveState& left,
                          const PrimitiveState& right, const UnitNormal& n,
                          const GasConstants& g, const FluxOptions& options) {
  switch (kind) {
  case FluxKind::Godunov:
    return godunov_flux(left, right, n, g, options.exact);
  case FluxKind::Roe:
    return roe_flux(left, right, n, g, options.roe_entropy_fix,
                    options.entropy_fix_fraction);
  case FluxKind::Hlle:
    return hlle_flux(left, right, n, g);
  }
  throw std::invalid_argument("unknown flux kind");
}

std::pair<PrimitiveState, PrimitiveState>
normal_shock_pair(const PrimitiveState& pre, double mach, double s, const GasConstants& g) {
  if (!(mach >= 1.0)) {
    throw std::invalid_argument("shock Mach number must be >= 1");
  }
  const double gamma = g.gamma;
  const double m2 = mach * mach;
  const double c = sound_speed(pre, g);
  PrimitiveState left = pre;
  left.u = s + mach * c;
  PrimitiveState right = pre;
  right.rho = pre.rho * (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0);
  right.p = pre.p * (1.0 + 2.0 * gamma / (gamma + 1.0) * (m2 - 1.0));
  right.u = s + (left.u - s) * pre.rho / right.rho;
  return {left, right};
}

} // namespace carbuncle
