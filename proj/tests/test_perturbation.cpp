#include "oracles.hpp"

#include "carbuncle/perturbation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace carbuncle;

namespace {

const GasConstants gas{};
constexpr double pi = std::numbers::pi;

ContactProfile step_profile() {
  ContactProfile p;
  p.rho0_left = [](double, double) { return 2.0; };
  p.rho0_right = [](double, double) { return 1.0; };
  p.v0 = [](double, double) { return 0.0; };
  p.u_r = 1.0;
  p.p_r = 1.0;
  return p;
}

ContactProfile smooth_profile(bool v_depends_on_y) {
  ContactProfile p;
  p.rho0_left = [](double x, double y) { return 2.0 + 0.3 * std::sin(x + 0.5 * y); };
  p.rho0_right = [](double x, double) { return 1.0 + 0.2 * std::cos(2 * x); };
  if (v_depends_on_y) {
    p.rho0_left = [](double x, double) { return 2.0 + 0.3 * std::sin(x); };
    p.v0 = [](double x, double y) { return 0.4 * std::sin(x) + 0.3 * std::cos(y); };
  } else {
    p.v0 = [](double x, double) { return 0.5 * std::sin(x); };
  }
  p.u_r = 0.7;
  p.p_r = 1.5;
  return p;
}

PerturbationField random_field(oracle::StateGen& gen) {
  const double a = gen.uniform(-0.1, 0.1), b = gen.uniform(-0.1, 0.1), c = gen.uniform(-0.1, 0.1);
  const double ph = gen.uniform(0, 6.28);
  return {[=](double x, double y) { return a * std::sin(x + 2 * y + ph); },
          [=](double x, double y) { return b * std::cos(2 * x - y); },
          [=](double x, double y) { return c * std::sin(x - y + ph); }};
}

// Advected smooth background with uniform velocity (U, V).
BackgroundFlow advected(double U, double V, double k, double phase) {
  BackgroundFlow bg;
  bg.rho = [=](double x, double y, double t) {
    return 1.0 + 0.2 * std::sin(k * (x - U * t) + phase) * std::cos(y - V * t);
  };
  bg.u = [=](double, double, double) { return U; };
  bg.v = [=](double, double, double) { return V; };
  return bg;
}

// Residual of the linearised system, by fourth-order differences written out
// here rather than with the library helper.
Eigen::Vector3d residual(const BackgroundFlow& bg, const PerturbationField& init, double x, double y,
                         double t) {
  const double h = 1e-3;
  const auto w = [&](double xs, double ys, double ts) {
    return duhamel_solution(bg, init, xs, ys, ts).vector();
  };
  const auto d = [&](auto f) {
    return Eigen::Vector3d((f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12 * h));
  };
  const Eigen::Vector3d wt = d([&](int k) { return w(x, y, t + k * h); });
  const Eigen::Vector3d wx = d([&](int k) { return w(x + k * h, y, t); });
  const Eigen::Vector3d wy = d([&](int k) { return w(x, y + k * h, t); });
  const auto rho_b = [&](double xs, double ys) { return bg.rho(xs, ys, t); };
  const double rx = (rho_b(x + h, y) - rho_b(x - h, y)) / (2 * h);
  const double ry = (rho_b(x, y + h) - rho_b(x, y - h)) / (2 * h);
  const Eigen::Vector3d val = w(x, y, t);
  Eigen::Vector3d r = wt + bg.u(x, y, t) * wx + bg.v(x, y, t) * wy;
  r[0] += val[1] * rx + val[2] * ry;
  return r;
}

} // namespace

TEST_CASE("central differences are exact on quartics") {
  const auto f = [](double s) { return 3 * s * s * s * s - s * s + 2; };
  const double h = fd_step(2.0);
  CHECK(h == doctest::Approx(2e-4));
  CHECK(central_difference(f, 0.7, 0.1) == doctest::Approx(12 * 0.343 - 1.4).epsilon(1e-12));
}

TEST_CASE("background gradients agree with finite differences") {
  BackgroundFlow bg;
  bg.rho = [](double x, double y, double t) { return 1 + 0.2 * std::sin(x - t) * std::cos(2 * y); };
  bg.u = [](double x, double y, double) { return 0.3 * std::cos(x + y); };
  bg.v = [](double x, double, double) { return 0.1 * x * x; };
  bg.grad_rho = [](double x, double y, double t) {
    return Eigen::Vector2d(0.2 * std::cos(x - t) * std::cos(2 * y), -0.4 * std::sin(x - t) * std::sin(2 * y));
  };
  BackgroundFlow fd = bg;
  fd.grad_rho.reset();
  oracle::StateGen gen(1);
  for (int n = 0; n < 20; ++n) {
    const double x = gen.uniform(-2, 2), y = gen.uniform(-2, 2), t = gen.uniform(0, 1);
    CHECK((bg.jacobian(x, y, t) - fd.jacobian(x, y, t)).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(bg.u_gradient(x, y, t)[0] == doctest::Approx(-0.3 * std::sin(x + y)).epsilon(1e-8));
    CHECK(bg.v_gradient(x, y, t)[0] == doctest::Approx(0.2 * x).epsilon(1e-8));
  }
  BackgroundFlow flat = fd;
  flat.x_only = true;
  CHECK(flat.jacobian(0.3, 0.2, 0.1).col(1).norm() == 0.0);
}

TEST_CASE("constant-pressure contact solution") {
  const ContactProfile p = step_profile();
  CHECK(prop1_solution(p, 3.0, 0.0, 2.0, gas).rho == 1.0);
  CHECK(prop1_solution(p, 1.0, 0.0, 2.0, gas).rho == 2.0);
  CHECK(prop1_solution(p, 1.0, 0.0, 2.0, gas).u == 1.0);
  CHECK(prop1_solution(p, 1.0, 0.0, 2.0, gas).p == 1.0);

  const ContactProfile s = smooth_profile(false);
  for (double x : {-1.3, -0.2, 0.4, 2.0}) {
    const PrimitiveState w = prop1_solution(s, x, 0.6, 0.0, gas);
    CHECK(w.rho == (x < 0 ? s.rho0_left(x, 0.6) : s.rho0_right(x, 0.6)));
    CHECK(w.v == s.v0(x, 0.6));
  }
  ContactProfile bad = s;
  bad.p_r = -1;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("contact solution solves the reduced system") {
  const ContactProfile s = smooth_profile(false);
  oracle::StateGen gen(12);
  for (int n = 0; n < 50; ++n) {
    const double t = gen.uniform(0.1, 2.0);
    const double x = s.u_r * t + (n % 2 ? 1 : -1) * gen.uniform(0.05, 2.0);
    const double y = gen.uniform(-2, 2);
    const TransportResidual r = prop1_residual(s, x, y, t, gas);
    CHECK(std::abs(r.rho) <= 1e-6);
    CHECK(std::abs(r.v) <= 1e-6);
    CHECK(std::abs(r.E) <= 1e-6);
  }
  ContactProfile flat = step_profile();
  const TransportResidual z = prop1_residual(flat, 5.0, 0.0, 1.0, gas);
  CHECK(std::abs(z.rho) <= 1e-12);
  CHECK(std::abs(z.v) <= 1e-12);
  CHECK(std::abs(z.E) <= 1e-12);
  CHECK_THROWS_AS(prop1_residual(s, 0.7 + 1e-5, 0.0, 1.0, gas), OnDiscontinuity);
}

TEST_CASE("energy defect for y-dependent tangential velocity") {
  const ContactProfile s = smooth_profile(true);
  oracle::StateGen gen(13);
  for (int n = 0; n < 50; ++n) {
    const double t = gen.uniform(0.1, 2.0);
    const double x = s.u_r * t + (n % 2 ? 1 : -1) * gen.uniform(0.05, 2.0);
    const double y = gen.uniform(-2, 2);
    const PrimitiveState w = prop1_solution(s, x, y, t, gas);
    // v(x, y, t) = v0(x - u_r t, y), so d_y v = -0.3 sin(y).
    const double vy = -0.3 * std::sin(y);
    const double expected = w.rho * w.v * w.v * vy;
    const TransportResidual r = prop1_residual(s, x, y, t, gas);
    CHECK(std::abs(r.rho) <= 1e-6);
    CHECK(std::abs(r.E - expected) <= 1e-6);
    CHECK(std::abs(r.v - w.v * vy) <= 1e-6);
  }
}

TEST_CASE("Duhamel solution") {
  oracle::StateGen gen(21);
  const PerturbationField init = random_field(gen);

  SUBCASE("constant background only advects") {
    const BackgroundFlow bg = BackgroundFlow::uniform(1.0, 0.4, -0.3);
    const PerturbationValue w = duhamel_solution(bg, init, 0.3, 0.8, 2.0);
    CHECK(w.rho == init.rho0(0.3 - 0.8, 0.8 + 0.6));
    CHECK(w.u == init.u0(0.3 - 0.8, 0.8 + 0.6));
    CHECK(w.vector() == w.homogeneous());
  }

  SUBCASE("linear background density") {
    BackgroundFlow bg;
    bg.rho = [](double x, double, double) { return 1.0 + 0.3 * x; };
    bg.u = [](double, double, double) { return 0.0; };
    bg.v = [](double, double, double) { return 0.0; };
    const PerturbationField u_only{[](double, double) { return 0.0; },
                                   [](double, double) { return 0.01; },
                                   [](double, double) { return 0.0; }};
    const PerturbationValue w = duhamel_solution(bg, u_only, 0.4, 0.1, 5.0);
    CHECK(w.rho == doctest::Approx(-0.015).epsilon(1e-8));
  }

  SUBCASE("satisfies the linearised system") {
    for (int n = 0; n < 30; ++n) {
      const BackgroundFlow bg =
          advected(gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(0.5, 2), gen.uniform(0, 6));
      const PerturbationField f = random_field(gen);
      const double x = gen.uniform(-3, 3), y = gen.uniform(-3, 3), t = gen.uniform(0.5, 3);
      CHECK(residual(bg, f, x, y, t).cwiseAbs().maxCoeff() <= 1e-5);
    }
  }

  SUBCASE("growth is linear in time on a steady background") {
    BackgroundFlow bg;
    bg.rho = [](double x, double y, double) { return 1.0 + 0.2 * std::sin(x) * std::cos(y); };
    bg.u = [](double, double, double) { return 0.0; };
    bg.v = [](double, double, double) { return 0.0; };
    const double x = 0.4, y = -0.7;
    const double g1 = (duhamel_solution(bg, init, x, y, 1.0).vector() -
                       duhamel_solution(bg, init, x, y, 1.0).homogeneous()).norm();
    for (double t : {0.5, 2.0, 7.5}) {
      const PerturbationValue w = duhamel_solution(bg, init, x, y, t);
      CHECK(std::abs((w.vector() - w.homogeneous()).norm() / t - g1) <= 1e-8 * (1 + g1));
    }
  }
}

TEST_CASE("mollifier") {
  for (double w : {0.5, 0.1, 0.02}) {
    const double mass = oracle::simpson([&](double s) { return gaussian_mollifier(s, w); }, -12 * w, 12 * w, 2000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(gaussian_mollifier(0.0, w / 2) == doctest::Approx(2 * gaussian_mollifier(0.0, w)).epsilon(1e-14));
  }
}

TEST_CASE("delta-source solution") {
  const DeltaSourceInit init{[](double x) { return 0.01 * std::cos(x); }, [](double) { return 0.02; }};
  DeltaSourceSpec spec{1.0, 0.5, 0.1};
  CHECK(delta_source_solution(spec, init, 0.3, 0.0) == init.q0(0.3));
  DeltaSourceSpec none = spec;
  none.jump = 0.0;
  CHECK(delta_source_solution(none, init, 0.3, 2.0) == init.q0(0.3 - 1.0));

  const double t = 1.5, x_peak = spec.carrier_speed * t;
  const auto peak = [&](double w) {
    DeltaSourceSpec s = spec;
    s.width = w;
    return std::abs(delta_source_solution(s, init, x_peak, t) - init.q0(0.0));
  };
  for (double w : {0.2, 0.05, 0.01}) CHECK(std::abs(peak(w / 2) / peak(w) - 2.0) <= 1e-6);

  spec.width = 0.0;
  CHECK_THROWS_AS(delta_source_solution(spec, init, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("energy bound") {
  const EnergyBound c = energy_bound(BackgroundFlow::uniform(1, 0.2, 0.3), {}, 4.0);
  CHECK(c.M == 0.0);
  CHECK(c.factor == 1.0);

  // Symmetric part of [[0, a, b], 0, 0] has eigenvalues +-sqrt(a^2 + b^2)/2.
  oracle::StateGen gen(33);
  for (int n = 0; n < 20; ++n) {
    const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2);
    BackgroundFlow bg;
    bg.rho = [=](double x, double y, double) { return 5.0 + a * x + b * y; };
    bg.u = [](double, double, double) { return 0.1; };
    bg.v = [](double, double, double) { return -0.2; };
    bg.grad_rho = [=](double, double, double) { return Eigen::Vector2d(a, b); };
    const EnergyBound e = energy_bound(bg, {}, 2.0);
    CHECK(e.M == doctest::Approx(0.5 * std::hypot(a, b)).epsilon(1e-12));
    CHECK(e.factor == doctest::Approx(std::exp(2.0 * e.M)));
  }

  // Divergence terms enter with weight 1/2.
  BackgroundFlow stretch;
  stretch.rho = [](double, double, double) { return 1.0; };
  stretch.u = [](double x, double, double) { return 0.6 * x; };
  stretch.v = [](double, double, double) { return 0.0; };
  stretch.grad_u = [](double, double, double) { return Eigen::Vector2d(0.6, 0.0); };
  // sym C has the single entry 0.6 on the diagonal.
  CHECK(energy_bound(stretch, {}, 1.0).M == doctest::Approx(0.6 + 0.3));

  BackgroundFlow wild;
  wild.rho = [](double x, double, double) { return 1.0 / x; };
  wild.u = [](double, double, double) { return 0.0; };
  wild.v = [](double, double, double) { return 0.0; };
  wild.grad_rho = [](double x, double, double) { return Eigen::Vector2d(-1.0 / (x * x), 0.0); };
  CHECK_THROWS_AS(energy_bound(wild, {-1, 1, -1, 1, 33, 33, 2}, 1.0), UnboundedDerivatives);
}

TEST_CASE("energy bound is never violated") {
  // Periodic background and data on the 2 pi box; norms by the trapezoid
  // rule, which is spectrally accurate for smooth periodic integrands.
  oracle::StateGen gen(55);
  for (int trial = 0; trial < 5; ++trial) {
    const BackgroundFlow bg = advected(gen.uniform(-1, 1), gen.uniform(-1, 1), 1.0, gen.uniform(0, 6));
    const PerturbationField init = random_field(gen);
    const int n = 48;
    const double h = 2 * pi / n;
    const auto norm = [&](double t) {
      double s = 0;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) s += duhamel_solution(bg, init, i * h, j * h, t).vector().squaredNorm();
      return std::sqrt(s * h * h);
    };
    const double n0 = norm(0.0);
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      const EnergyBound b = energy_bound(bg, {0, 2 * pi, 0, 2 * pi, 33, 33, 5}, t);
      CHECK(norm(t) <= b.factor * n0 * (1 + 1e-12));
    }
  }
}

TEST_CASE("field csv") {
  std::ostringstream out;
  write_field_csv(out, Eigen::Vector2d(0, 1), Eigen::Vector3d(0, 1, 2), [](double x, double y) { return x + y; });
  const std::string s = out.str();
  CHECK(s.rfind("x,y,val\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 7);
}
