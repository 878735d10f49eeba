#ifndef CARBUNCLE_EULER_HPP
#define CARBUNCLE_EULER_HPP

// Gas-state algebra for the 2D Euler equations of a gamma-law gas.
//
// Conserved states and flux vectors are plain Eigen 4-vectors ordered
// (rho, rho*u, rho*v, E). Everything here is templated on the scalar type so
// the same routines can be evaluated with automatic-differentiation scalars;
// the rest of the library instantiates them with double.

#include "carbuncle/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace carbuncle {

template <typename Scalar> using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar> using BasicConservedState = Vector4<Scalar>;
template <typename Scalar> using BasicFluxVector = Vector4<Scalar>;

using ConservedState = BasicConservedState<double>;
using FluxVector = BasicFluxVector<double>;

/// Absolute floor below which density or pressure is considered non-physical.
inline constexpr double kPhysicalFloor = 1e-12;

template <typename Scalar> struct BasicGasConstants {
  Scalar gamma{1.4};
  Scalar R{287.0};

  Scalar cv() const { return R / (gamma - Scalar(1)); }
  Scalar cp() const { return gamma * R / (gamma - Scalar(1)); }

  void validate() const {
    if (!(gamma > Scalar(1)) || !(R > Scalar(0))) {
      throw std::invalid_argument("gas constants require gamma > 1 and R > 0");
    }
  }
};
using GasConstants = BasicGasConstants<double>;

template <typename Scalar> struct BasicPrimitiveState {
  Scalar rho{1};
  Scalar u{0};
  Scalar v{0};
  Scalar p{1};

  Vector4<Scalar> as_vector() const { return {rho, u, v, p}; }
  static BasicPrimitiveState from_vector(const Vector4<Scalar>& w) {
    return {w[0], w[1], w[2], w[3]};
  }
  friend bool operator==(const BasicPrimitiveState&,
                         const BasicPrimitiveState&) = default;
};
using PrimitiveState = BasicPrimitiveState<double>;

template <typename Scalar> bool is_physical(const BasicPrimitiveState<Scalar>& w) {
  return w.rho > Scalar(kPhysicalFloor) && w.p > Scalar(kPhysicalFloor);
}

/// Unit vector (nx, ny). Construction checks |n| = 1 to 1e-12.
template <typename Scalar> class BasicUnitNormal {
public:
  BasicUnitNormal(Scalar nx, Scalar ny) : nx_(nx), ny_(ny) {
    using std::abs;
    if (!(abs(nx * nx + ny * ny - Scalar(1)) <= Scalar(1e-12))) {
      throw std::invalid_argument("normal vector is not of unit length");
    }
  }
  static BasicUnitNormal x() { return {Scalar(1), Scalar(0)}; }
  static BasicUnitNormal y() { return {Scalar(0), Scalar(1)}; }
  static BasicUnitNormal from_angle(Scalar angle) {
    using std::cos;
    using std::sin;
    return {cos(angle), sin(angle)};
  }

  Scalar nx() const { return nx_; }
  Scalar ny() const { return ny_; }

private:
  Scalar nx_;
  Scalar ny_;
};
using UnitNormal = BasicUnitNormal<double>;

template <typename Scalar>
BasicConservedState<Scalar> prim_to_cons(const BasicPrimitiveState<Scalar>& w,
                                         const BasicGasConstants<Scalar>& g) {
  const Scalar kinetic = Scalar(0.5) * w.rho * (w.u * w.u + w.v * w.v);
  return {w.rho, w.rho * w.u, w.rho * w.v, w.p / (g.gamma - Scalar(1)) + kinetic};
}

/// Throws NonPhysicalState if rho or the derived pressure is below the floor.
template <typename Scalar>
BasicPrimitiveState<Scalar> cons_to_prim(const BasicConservedState<Scalar>& q,
                                         const BasicGasConstants<Scalar>& g) {
  if (!(q[0] > Scalar(kPhysicalFloor))) {
    throw NonPhysicalState("non-positive density");
  }
  const Scalar u = q[1] / q[0];
  const Scalar v = q[2] / q[0];
  const Scalar p =
      (g.gamma - Scalar(1)) * (q[3] - Scalar(0.5) * (q[1] * u + q[2] * v));
  if (!(p > Scalar(kPhysicalFloor))) {
    throw NonPhysicalState("non-positive pressure");
  }
  return {q[0], u, v, p};
}

template <typename Scalar>
Scalar sound_speed(const BasicPrimitiveState<Scalar>& w,
                   const BasicGasConstants<Scalar>& g) {
  using std::sqrt;
  return sqrt(g.gamma * w.p / w.rho);
}

template <typename Scalar>
Scalar total_enthalpy(const BasicPrimitiveState<Scalar>& w,
                      const BasicGasConstants<Scalar>& g) {
  return g.gamma / (g.gamma - Scalar(1)) * w.p / w.rho +
         Scalar(0.5) * (w.u * w.u + w.v * w.v);
}

template <typename Scalar>
BasicFluxVector<Scalar> flux_x(const BasicPrimitiveState<Scalar>& w,
                               const BasicGasConstants<Scalar>& g) {
  const Scalar E = prim_to_cons(w, g)[3];
  const Scalar mx = w.rho * w.u;
  return {mx, mx * w.u + w.p, mx * w.v, w.u * (E + w.p)};
}

template <typename Scalar>
BasicFluxVector<Scalar> flux_y(const BasicPrimitiveState<Scalar>& w,
                               const BasicGasConstants<Scalar>& g) {
  const Scalar E = prim_to_cons(w, g)[3];
  const Scalar my = w.rho * w.v;
  return {my, my * w.u, my * w.v + w.p, w.v * (E + w.p)};
}

template <typename Scalar>
BasicFluxVector<Scalar> flux_x(const BasicConservedState<Scalar>& q,
                               const BasicGasConstants<Scalar>& g) {
  return flux_x(cons_to_prim(q, g), g);
}

template <typename Scalar>
BasicFluxVector<Scalar> flux_y(const BasicConservedState<Scalar>& q,
                               const BasicGasConstants<Scalar>& g) {
  return flux_y(cons_to_prim(q, g), g);
}

// Normal-frame rotation. In the rotated frame u holds the normal velocity
// and v the tangential one, so any x-directed routine applies unchanged.

template <typename Scalar>
BasicPrimitiveState<Scalar> to_normal_frame(const BasicPrimitiveState<Scalar>& w,
                                            const BasicUnitNormal<Scalar>& n) {
  return {w.rho, w.u * n.nx() + w.v * n.ny(), -w.u * n.ny() + w.v * n.nx(), w.p};
}

template <typename Scalar>
BasicPrimitiveState<Scalar> from_normal_frame(const BasicPrimitiveState<Scalar>& w,
                                              const BasicUnitNormal<Scalar>& n) {
  return {w.rho, w.u * n.nx() - w.v * n.ny(), w.u * n.ny() + w.v * n.nx(), w.p};
}

/// Rotates the momentum components of a conserved/flux vector out of the
/// normal frame back into (x, y).
template <typename Scalar>
Vector4<Scalar> rotate_from_normal_frame(const Vector4<Scalar>& f,
                                         const BasicUnitNormal<Scalar>& n) {
  return {f[0], f[1] * n.nx() - f[2] * n.ny(), f[1] * n.ny() + f[2] * n.nx(),
          f[3]};
}

template <typename Scalar>
Vector4<Scalar> rotate_to_normal_frame(const Vector4<Scalar>& f,
                                       const BasicUnitNormal<Scalar>& n) {
  return {f[0], f[1] * n.nx() + f[2] * n.ny(), -f[1] * n.ny() + f[2] * n.nx(),
          f[3]};
}

/// Physical flux through a face with normal n: nx*f + ny*g.
template <typename Scalar>
BasicFluxVector<Scalar> flux_normal(const BasicPrimitiveState<Scalar>& w,
                                    const BasicUnitNormal<Scalar>& n,
                                    const BasicGasConstants<Scalar>& g) {
  return rotate_from_normal_frame(flux_x(to_normal_frame(w, n), g), n);
}

/// s*(q_r - q_l) - (F_n(q_r) - F_n(q_l)); vanishes for an admissible single
/// discontinuity travelling at speed s along n.
template <typename Scalar>
Vector4<Scalar> rh_residual(const BasicConservedState<Scalar>& left,
                            const BasicConservedState<Scalar>& right, Scalar s,
                            const BasicUnitNormal<Scalar>& n,
                            const BasicGasConstants<Scalar>& g) {
  const auto wl = cons_to_prim(left, g);
  const auto wr = cons_to_prim(right, g);
  return s * (right - left) - (flux_normal(wr, n, g) - flux_normal(wl, n, g));
}

/// Jacobian n.DF(q) of the normal flux with respect to the conserved
/// variables, in closed form.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> flux_jacobian(const BasicPrimitiveState<Scalar>& w,
                                          const BasicUnitNormal<Scalar>& n,
                                          const BasicGasConstants<Scalar>& g) {
  const Scalar gm1 = g.gamma - Scalar(1);
  const Scalar u = w.u;
  const Scalar v = w.v;
  const Scalar un = u * n.nx() + v * n.ny();
  const Scalar q2 = Scalar(0.5) * (u * u + v * v);
  const Scalar H = total_enthalpy(w, g);
  Eigen::Matrix<Scalar, 4, 4> A;
  A << Scalar(0), n.nx(), n.ny(), Scalar(0),
      gm1 * q2 * n.nx() - u * un, un - (g.gamma - Scalar(2)) * u * n.nx(),
      u * n.ny() - gm1 * v * n.nx(), gm1 * n.nx(),
      gm1 * q2 * n.ny() - v * un, v * n.nx() - gm1 * u * n.ny(),
      un - (g.gamma - Scalar(2)) * v * n.ny(), gm1 * n.ny(),
      (gm1 * q2 - H) * un, H * n.nx() - gm1 * u * un,
      H * n.ny() - gm1 * v * un, g.gamma * un;
  return A;
}

} // namespace carbuncle

#endif
