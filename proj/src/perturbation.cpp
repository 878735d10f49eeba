#include "carbuncle/perturbation.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace carbuncle {

double fd_step(double scale) { return 1e-4 * scale; }

namespace {

Eigen::Vector2d fd_gradient(const ScalarField& f, double x, double y, double t, double h) {
  return {central_difference([&](double s) { return f(s, y, t); }, x, h),
          central_difference([&](double s) { return f(x, s, t); }, y, h)};
}

} // namespace

BackgroundFlow BackgroundFlow::uniform(double rho, double u, double v) {
  BackgroundFlow bg;
  bg.rho = [rho](double, double, double) { return rho; };
  bg.u = [u](double, double, double) { return u; };
  bg.v = [v](double, double, double) { return v; };
  const auto zero = [](double, double, double) { return Eigen::Vector2d::Zero().eval(); };
  bg.grad_rho = zero;
  bg.grad_u = zero;
  bg.grad_v = zero;
  bg.constant = true;
  bg.x_only = true;
  return bg;
}

Eigen::Vector2d BackgroundFlow::rho_gradient(double x, double y, double t) const {
  if (constant) return Eigen::Vector2d::Zero();
  return grad_rho ? (*grad_rho)(x, y, t) : fd_gradient(rho, x, y, t, fd_step(scale));
}

Eigen::Vector2d BackgroundFlow::u_gradient(double x, double y, double t) const {
  if (constant) return Eigen::Vector2d::Zero();
  return grad_u ? (*grad_u)(x, y, t) : fd_gradient(u, x, y, t, fd_step(scale));
}

Eigen::Vector2d BackgroundFlow::v_gradient(double x, double y, double t) const {
  if (constant) return Eigen::Vector2d::Zero();
  return grad_v ? (*grad_v)(x, y, t) : fd_gradient(v, x, y, t, fd_step(scale));
}

Eigen::Matrix<double, 3, 2> BackgroundFlow::jacobian(double x, double y, double t) const {
  Eigen::Matrix<double, 3, 2> J;
  J.row(0) = rho_gradient(x, y, t).transpose();
  J.row(1) = u_gradient(x, y, t).transpose();
  J.row(2) = v_gradient(x, y, t).transpose();
  if (x_only) J.col(1).setZero();
  return J;
}

void ContactProfile::validate() const {
  if (!rho0_left || !rho0_right || !v0) {
    throw std::invalid_argument("contact profile requires densities and tangential velocity");
  }
  if (!(p_r > 0.0)) throw std::invalid_argument("contact profile pressure must be positive");
}

PrimitiveState prop1_solution(const ContactProfile& profile, double x, double y, double t,
                              const GasConstants& /*g*/) {
  const double xi = x - profile.u_r * t;
  const double v = profile.v0(xi, y);
  const double eta = y - v * t;
  const double rho = xi < 0.0 ? profile.rho0_left(xi, eta) : profile.rho0_right(xi, eta);
  return {rho, profile.u_r, v, profile.p_r};
}

TransportResidual prop1_residual(const ContactProfile& profile, double x, double y, double t,
                                 const GasConstants& g, double scale) {
  const double h = fd_step(scale);
  const double guard = 4.0 * h * (1.0 + std::abs(profile.u_r));
  if (std::abs(x - profile.u_r * t) < guard) {
    throw OnDiscontinuity("finite-difference stencil straddles the contact");
  }

  // Components (rho, v, E) of the solution as functions of (x, y, t).
  const auto state = [&](double xs, double ys, double ts) {
    const PrimitiveState w = prop1_solution(profile, xs, ys, ts, g);
    return Eigen::Vector3d(w.rho, w.v, prim_to_cons(w, g)[3]);
  };
  const auto dt = central_difference([&](double s) { return state(x, y, s); }, t, h);
  const auto dx = central_difference([&](double s) { return state(s, y, t); }, x, h);
  const auto dy = central_difference([&](double s) { return state(x, s, t); }, y, h);

  const double v = prop1_solution(profile, x, y, t, g).v;
  const Eigen::Vector3d r = dt + profile.u_r * dx + v * dy;
  return {r[0], r[1], r[2]};
}

PerturbationValue homogeneous_solution(const BackgroundFlow& bg, const PerturbationField& init,
                                       double x, double y, double t) {
  const double xs = x - bg.u(x, y, t) * t;
  const double ys = y - bg.v(x, y, t) * t;
  PerturbationValue w;
  w.rho = w.rho_h = init.rho0(xs, ys);
  w.u = w.u_h = init.u0(xs, ys);
  w.v = w.v_h = init.v0(xs, ys);
  return w;
}

PerturbationValue duhamel_solution(const BackgroundFlow& bg, const PerturbationField& init,
                                   double x, double y, double t) {
  PerturbationValue w = homogeneous_solution(bg, init, x, y, t);
  if (bg.constant) return w;
  const Eigen::Vector3d growth = bg.jacobian(x, y, t) * Eigen::Vector2d(w.u_h, w.v_h);
  w.rho = w.rho_h - t * growth[0];
  w.u = w.u_h - t * growth[1];
  w.v = w.v_h - t * growth[2];
  return w;
}

double gaussian_mollifier(double s, double w) {
  return std::exp(-s * s / (2.0 * w * w)) / (w * std::sqrt(2.0 * std::numbers::pi));
}

void DeltaSourceSpec::validate() const {
  if (!(width > 0.0)) throw std::invalid_argument("mollifier width must be positive");
}

double delta_source_solution(const DeltaSourceSpec& spec, const DeltaSourceInit& init, double x,
                             double t) {
  spec.validate();
  const double xi = x - spec.carrier_speed * t;
  const double q_h = init.q0(xi);
  if (spec.jump == 0.0 || t == 0.0) return q_h;
  return q_h - t * init.u0(xi) * spec.jump * gaussian_mollifier(xi, spec.width);
}

EnergyBound energy_bound(const BackgroundFlow& bg, const SampleDomain& domain, double t,
                         double guard) {
  if (domain.nx < 1 || domain.ny < 1 || domain.nt < 1) {
    throw std::invalid_argument("energy_bound needs at least one sample per axis");
  }
  EnergyBound out;
  if (!bg.constant) {
    const auto coord = [](double a, double b, int n, int k) {
      return n == 1 ? 0.5 * (a + b) : a + (b - a) * k / (n - 1);
    };
    for (int l = 0; l < domain.nt; ++l) {
      const double ts = domain.nt == 1 ? t : t * l / (domain.nt - 1);
      for (int j = 0; j < domain.ny; ++j) {
        for (int i = 0; i < domain.nx; ++i) {
          const double x = coord(domain.x0, domain.x1, domain.nx, i);
          const double y = coord(domain.y0, domain.y1, domain.ny, j);
          const Eigen::Matrix<double, 3, 2> J = bg.jacobian(x, y, ts);
          if (!J.allFinite() || J.cwiseAbs().maxCoeff() > guard) {
            throw UnboundedDerivatives("background derivative exceeds the smoothness guard");
          }
          Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
          C.rightCols<2>() = -J;
          const Eigen::Matrix3d S = 0.5 * (C + C.transpose());
          const double norm =
              Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(S, Eigen::EigenvaluesOnly)
                  .eigenvalues()
                  .cwiseAbs()
                  .maxCoeff();
          out.M = std::max(out.M, norm + 0.5 * (std::abs(J(1, 0)) + std::abs(J(2, 1))));
        }
      }
    }
  }
  out.factor = std::exp(out.M * std::abs(t));
  return out;
}

void write_field_csv(std::ostream& out, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                     const std::function<double(double, double)>& f) {
  out << "x,y,val\n";
  out.precision(17);
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      out << x[i] << ',' << y[j] << ',' << f(x[i], y[j]) << '\n';
    }
  }
}

} // namespace carbuncle
