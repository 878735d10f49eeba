#ifndef CARBUNCLE_PERTURBATION_HPP
#define CARBUNCLE_PERTURBATION_HPP

// Analytic solutions and linearised perturbation propagators for
// constant-pressure flows behind a shock.
//
// The constant-pressure system is
//
//   rho_t + u rho_x + v rho_y = 0
//   u_t   + u u_x   + v u_y   = 0
//   v_t   + u v_x   + v v_y   = 0
//
// and a background (rho_b, u_b, v_b) solving it is perturbed by
// (rho', u', v'). Dropping quadratic terms gives
//
//   L rho' = -u' d_x rho_b - v' d_y rho_b
//   L u'   = -u' d_x u_b   - v' d_y u_b
//   L v'   = -u' d_x v_b   - v' d_y v_b,     L = d_t + u_b d_x + v_b d_y.

#include "carbuncle/euler.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <type_traits>

namespace carbuncle {

using ScalarField = std::function<double(double x, double y, double t)>;
using GradientField = std::function<Eigen::Vector2d(double x, double y, double t)>;

/// Step used by the fourth-order central differences: h = 1e-4 * scale.
double fd_step(double scale);

/// Fourth-order central difference of f at s.
template <typename F> auto central_difference(F&& f, double s, double h) {
  using R = std::decay_t<decltype(f(s))>;
  return R((f(s - 2 * h) - 8 * f(s - h) + 8 * f(s + h) - f(s + 2 * h)) / (12 * h));
}

/// Smooth background flow. Gradients fall back to finite differences when
/// no analytic expression is supplied.
struct BackgroundFlow {
  ScalarField rho;
  ScalarField u;
  ScalarField v;
  std::optional<GradientField> grad_rho;
  std::optional<GradientField> grad_u;
  std::optional<GradientField> grad_v;
  /// Length scale of the domain, sets the finite-difference step.
  double scale{1.0};
  bool constant{false};
  bool x_only{false};

  static BackgroundFlow uniform(double rho, double u, double v);

  Eigen::Vector2d rho_gradient(double x, double y, double t) const;
  Eigen::Vector2d u_gradient(double x, double y, double t) const;
  Eigen::Vector2d v_gradient(double x, double y, double t) const;

  /// Rows are (rho, u, v), columns (d_x, d_y): the matrix -C of the vector
  /// form w_t + A w_x + B w_y + C w = 0 restricted to its non-zero columns.
  Eigen::Matrix<double, 3, 2> jacobian(double x, double y, double t) const;
};

/// Initial perturbation (rho'0, u'0, v'0).
struct PerturbationField {
  std::function<double(double, double)> rho0;
  std::function<double(double, double)> u0;
  std::function<double(double, double)> v0;
};

struct PerturbationValue {
  double rho{};
  double u{};
  double v{};
  /// Homogeneous parts, i.e. the initial data carried along the background
  /// characteristics.
  double rho_h{};
  double u_h{};
  double v_h{};

  Eigen::Vector3d vector() const { return {rho, u, v}; }
  Eigen::Vector3d homogeneous() const { return {rho_h, u_h, v_h}; }
};

/// Data of a contact region behind a plane shock: constant pressure p_r and
/// normal velocity u_r, density rho0_left / rho0_right on either side of
/// x = 0 at t = 0 and tangential velocity v0.
struct ContactProfile {
  std::function<double(double, double)> rho0_left;
  std::function<double(double, double)> rho0_right;
  std::function<double(double, double)> v0;
  double u_r{0.0};
  double p_r{1.0};

  void validate() const;
};

/// Constant-pressure solution: the density is carried along
/// (x - u_r t, y - v t) and v = v0(x - u_r t, .). The side of the contact is
/// decided by the sign of x - u_r t.
PrimitiveState prop1_solution(const ContactProfile& profile, double x, double y, double t,
                              const GasConstants& g);

struct TransportResidual {
  double rho{};
  double v{};
  double E{};
};

/// Applies d_t + u_r d_x + v d_y to (rho, v, E) of prop1_solution by
/// fourth-order differences. Zero up to truncation when v0 is independent of
/// y; otherwise the energy component picks up rho v v d_y v.
///
/// Throws OnDiscontinuity if the stencil would straddle x = u_r t.
TransportResidual prop1_residual(const ContactProfile& profile, double x, double y, double t,
                                 const GasConstants& g, double scale = 1.0);

/// Initial data advected with the local background velocity.
PerturbationValue homogeneous_solution(const BackgroundFlow& bg, const PerturbationField& init,
                                       double x, double y, double t);

/// Perturbation growing linearly in time:
///   rho' = rho'_h - t (u'_h d_x rho_b + v'_h d_y rho_b)
/// and likewise for u', v'. Solves the linearised system exactly when the
/// background velocity is uniform.
PerturbationValue duhamel_solution(const BackgroundFlow& bg, const PerturbationField& init,
                                   double x, double y, double t);

/// Normalised Gaussian exp(-s^2 / 2w^2) / (w sqrt(2 pi)).
double gaussian_mollifier(double s, double w);

/// Which background jump drives the singular source.
enum class JumpKind { Density, TangentialVelocity };

/// Contact discontinuity carried at speed u_r whose background derivative is
/// replaced by jump * delta_w(x - u_r t).
struct DeltaSourceSpec {
  double jump{1.0};
  double carrier_speed{0.0};
  double width{0.1};
  JumpKind kind{JumpKind::Density};

  void validate() const;
};

/// One-dimensional initial data for the delta-source problem: the perturbed
/// quantity (density or tangential velocity) and the normal velocity.
struct DeltaSourceInit {
  std::function<double(double)> q0;
  std::function<double(double)> u0;
};

/// q' = q'_h - t u'_h jump delta_w(x - u_r t).
double delta_source_solution(const DeltaSourceSpec& spec, const DeltaSourceInit& init, double x,
                             double t);

/// Rectangle and sample counts for energy_bound.
struct SampleDomain {
  double x0{0.0}, x1{1.0};
  double y0{0.0}, y1{1.0};
  int nx{33};
  int ny{33};
  int nt{5};
};

struct EnergyBound {
  double M{0.0};
  double factor{1.0};
};

/// M = max over sampled (x, y, t') with t' in [0, t] of
///   |sym C|_2 + (|d_x u_b| + |d_y v_b|) / 2,
/// factor = exp(M |t|). Throws UnboundedDerivatives when a sampled
/// derivative is not finite or exceeds `guard`.
EnergyBound energy_bound(const BackgroundFlow& bg, const SampleDomain& domain, double t,
                         double guard = 1e8);

/// Writes "x,y,val" rows for f sampled at (x[i], y[j]), row-major in j.
void write_field_csv(std::ostream& out, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                     const std::function<double(double, double)>& f);

} // namespace carbuncle

#endif
