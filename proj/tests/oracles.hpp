// Reference computations used by the tests. Each one is written from the
// textbook relations, without calling the library it checks.
#ifndef CARBUNCLE_TESTS_ORACLES_HPP
#define CARBUNCLE_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

struct Prim {
  double rho, u, v, p;
};

inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int k = 0; k < iters; ++k) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Velocity change across a 1- or 3-wave as a function of the star pressure.
inline double wave_function(double p, const Prim& w, double gamma) {
  const double c = std::sqrt(gamma * w.p / w.rho);
  if (p > w.p) {
    const double A = 2.0 / ((gamma + 1.0) * w.rho);
    const double B = (gamma - 1.0) / (gamma + 1.0) * w.p;
    return (p - w.p) * std::sqrt(A / (p + B));
  }
  return 2.0 * c / (gamma - 1.0) * (std::pow(p / w.p, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
}

struct Star {
  double p, u;
};

// Star pressure and velocity by bisection on the pressure function.
inline Star riemann_star(const Prim& l, const Prim& r, double gamma) {
  const auto f = [&](double p) {
    return wave_function(p, l, gamma) + wave_function(p, r, gamma) + (r.u - l.u);
  };
  double hi = std::max(l.p, r.p);
  while (f(hi) < 0) hi *= 2.0;
  const double p = bisect(f, 1e-14, hi);
  const double u = 0.5 * (l.u + r.u) + 0.5 * (wave_function(p, r, gamma) - wave_function(p, l, gamma));
  return {p, u};
}

// Post-shock state of a stationary normal shock, by bisection on the energy
// balance for the downstream velocity (mass and momentum fix the rest).
inline Prim stationary_shock_post(const Prim& pre, double gamma) {
  const double m = pre.rho * pre.u;
  const double h1 = gamma / (gamma - 1.0) * pre.p / pre.rho + 0.5 * pre.u * pre.u;
  const auto energy = [&](double u2) {
    const double p2 = pre.p + m * (pre.u - u2);
    const double rho2 = m / u2;
    return gamma / (gamma - 1.0) * p2 / rho2 + 0.5 * u2 * u2 - h1;
  };
  // The weak root is u2 = u1; bracket the compressive one below the sonic
  // point, where the energy residual changes sign.
  const double c1 = std::sqrt(gamma * pre.p / pre.rho);
  const double u_sonic = (gamma - 1.0) / (gamma + 1.0) * pre.u +
                         2.0 / (gamma + 1.0) * c1 * c1 / pre.u;
  const double u_mid = std::sqrt(u_sonic * pre.u);
  const double u2 = bisect(energy, 1e-9 * pre.u, std::min(u_mid, pre.u * (1 - 1e-9)));
  return {m / u2, u2, pre.v, pre.p + m * (pre.u - u2)};
}

inline Eigen::Vector4d cons(const Prim& w, double gamma) {
  return {w.rho, w.rho * w.u, w.rho * w.v,
          w.p / (gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v)};
}

inline Eigen::Vector4d fx(const Prim& w, double gamma) {
  const double E = cons(w, gamma)[3];
  return {w.rho * w.u, w.rho * w.u * w.u + w.p, w.rho * w.u * w.v, w.u * (E + w.p)};
}

// Hand-rolled generator of physical states.
struct StateGen {
  std::mt19937_64 rng;
  explicit StateGen(std::uint64_t seed) : rng(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }
  Prim state() {
    return {log_uniform(0.1, 10.0), uniform(-2.0, 2.0), uniform(-2.0, 2.0), log_uniform(0.1, 10.0)};
  }
};

// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

} // namespace oracle

#endif
