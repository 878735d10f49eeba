#ifndef CARBUNCLE_RIEMANN_HPP
#define CARBUNCLE_RIEMANN_HPP

#include "carbuncle/euler.hpp"

#include <string_view>
#include <utility>

namespace carbuncle {

enum class WaveKind { Shock, Rarefaction, Contact };

std::string_view to_string(WaveKind kind);

/// Complete self-similar solution of a plane-wave Riemann problem, stored in
/// the x-directed frame (u normal, v tangential).
///
/// For a shock the head and tail speeds coincide. For a rarefaction the head
/// is the edge adjacent to the unperturbed state.
struct RiemannFan {
  PrimitiveState left;
  PrimitiveState right;
  double p_star{};
  double u_star{};
  double rho_star_left{};
  double rho_star_right{};
  WaveKind wave1{WaveKind::Rarefaction};
  WaveKind wave3{WaveKind::Rarefaction};
  double s1_head{};
  double s1_tail{};
  double s2{};
  double s3_tail{};
  double s3_head{};
  int iterations{};

  PrimitiveState star_left() const {
    return {rho_star_left, u_star, left.v, p_star};
  }
  PrimitiveState star_right() const {
    return {rho_star_right, u_star, right.v, p_star};
  }

  /// Number of waves of non-negligible strength, counting the contact once
  /// if either the density or the tangential velocity jumps across it.
  int active_waves(double rel_tol = 1e-10) const;
};

struct ExactSolverOptions {
  int newton_iterations = 50;
  double tolerance = 1e-12;
};

/// Exact solution of the Riemann problem in the x-direction. Newton iteration
/// on the star pressure from the two-rarefaction guess, with bisection as the
/// fallback when Newton fails to converge.
///
/// Throws VacuumFormation if the data generate vacuum and NoConvergence if
/// neither iteration reaches the tolerance.
RiemannFan solve_exact(const PrimitiveState& left, const PrimitiveState& right,
                       const GasConstants& g, const ExactSolverOptions& options = {});

/// State at similarity coordinate xi = x/t.
PrimitiveState sample_fan(const RiemannFan& fan, double xi, const GasConstants& g);

/// Signed strengths of the waves connecting two states.
///
///   eps1  = p*/p_l - 1          (1-wave, relative pressure jump)
///   eps2  = rho*_r/rho*_l - 1   (contact, relative density jump)
///   eps3  = p_r/p* - 1          (3-wave, relative pressure jump)
///   shear = v_r - v_l           (tangential velocity jump at the contact)
struct WaveStrengths {
  double eps1{};
  double eps2{};
  double eps3{};
  double shear{};
};

WaveStrengths wave_strengths(const PrimitiveState& left, const PrimitiveState& right,
                             const GasConstants& g);

/// Inverse of wave_strengths: walks the 1-wave curve, the contact and the
/// 3-wave curve from the left state.
PrimitiveState apply_wave_strengths(const PrimitiveState& left, const WaveStrengths& eps,
                                    const GasConstants& g);

enum class FluxKind { Godunov, Roe, Hlle };

std::string_view to_string(FluxKind kind);
FluxKind parse_flux_kind(std::string_view name);

struct FluxOptions {
  bool roe_entropy_fix = false;
  /// Harten fix threshold as a fraction of the Roe-averaged sound speed.
  double entropy_fix_fraction = 0.1;
  ExactSolverOptions exact;
};

FluxVector godunov_flux(const PrimitiveState& left, const PrimitiveState& right,
                        const UnitNormal& n, const GasConstants& g,
                        const ExactSolverOptions& options = {});

/// Wave-speed bounds (b-, b+) of the HLLE flux: the extremes of the one-sided
/// and Roe-averaged acoustic speeds, clamped so that b- <= 0 <= b+.
std::pair<double, double> hlle_wave_bounds(const PrimitiveState& left,
                                           const PrimitiveState& right,
                                           const UnitNormal& n, const GasConstants& g);

FluxVector hlle_flux(const PrimitiveState& left, const PrimitiveState& right,
                     const UnitNormal& n, const GasConstants& g);

/// Roe's linearised flux. The raw scheme is the default; the Harten-type
/// entropy fix is applied to the acoustic fields only when requested.
FluxVector roe_flux(const PrimitiveState& left, const PrimitiveState& right,
                    const UnitNormal& n, const GasConstants& g,
                    bool entropy_fix = false, double fix_fraction = 0.1);

FluxVector numerical_flux(FluxKind kind, const PrimitiveState& left,
                          const PrimitiveState& right, const UnitNormal& n,
                          const GasConstants& g, const FluxOptions& options = {});

/// States on either side of a normal shock of the given Mach number
/// (relative to the pre-shock gas) travelling at speed s in the x-direction.
/// The pre-shock state sits on the left and enters the shock from the left;
/// its density, pressure and tangential velocity are taken from `pre`, its
/// normal velocity is set to s + mach * c_pre.
std::pair<PrimitiveState, PrimitiveState>
normal_shock_pair(const PrimitiveState& pre, double mach, double s, const GasConstants& g);

} // namespace carbuncle

#endif
