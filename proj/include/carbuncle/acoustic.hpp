#ifndef CARBUNCLE_ACOUSTIC_HPP
#define CARBUNCLE_ACOUSTIC_HPP

#include <Eigen/Dense>

namespace carbuncle {

/// Periodic sampling of [0, lx) x [0, ly): entry (j, i) of a field holds the
/// value at x = i lx/nx, y = j ly/ny.
struct PeriodicGrid {
  int nx{64};
  int ny{64};
  double lx{1.0};
  double ly{1.0};

  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  void validate() const;
};

/// Constant background for homentropic density perturbations.
struct AcousticBackground {
  double c0{1.0};
  double u0{0.0};
  double v0{0.0};
};

enum class AcousticScheme { Leapfrog, Spectral };

/// Solves a_tt = c0^2 (a_xx + a_yy) on a periodic grid, where a(x, y, tau)
/// is the density perturbation in the frame moving with the background.
///
/// Leapfrog uses the five-point Laplacian and conserves
///   E = 1/2 |(a^{n+1} - a^n)/dt|^2 + 1/2 <a^{n+1}, K a^n>,   K = -c0^2 Lap_h,
/// exactly up to rounding. The spectral scheme advances every Fourier mode
/// with its exact phase and conserves the continuous energy of the
/// trigonometric interpolant.
class AcousticPropagator {
public:
  AcousticPropagator(const PeriodicGrid& grid, const AcousticBackground& bg,
                     const Eigen::MatrixXd& a0, const Eigen::MatrixXd& rate0, double dt,
                     AcousticScheme scheme = AcousticScheme::Leapfrog);

  void step();
  void advance(int steps);

  double time() const { return time_; }
  double dt() const { return dt_; }
  long steps() const { return steps_; }

  /// Discrete wave energy, sum of (1/2 a_tau^2 + 1/2 c0^2 |grad a|^2) dx dy.
  double energy() const;

  /// Field in the frame moving with the background.
  const Eigen::MatrixXd& field() const { return a_; }

  /// Field at the same time in the lab frame, a(x - u0 t, y - v0 t, t),
  /// obtained by a Fourier phase shift.
  Eigen::MatrixXd lab_field() const;

  /// Largest stable leapfrog step: 1 / (c0 sqrt(1/dx^2 + 1/dy^2)).
  static double max_stable_dt(const PeriodicGrid& grid, double c0);

private:
  PeriodicGrid grid_;
  AcousticBackground bg_;
  AcousticScheme scheme_;
  double dt_;
  double time_{0.0};
  long steps_{0};
  Eigen::MatrixXd a_;
  // Leapfrog only: previous time level.
  Eigen::MatrixXd aux_;
  // Spectral only: transforms of the initial field and rate.
  Eigen::MatrixXcd a0_hat_;
  Eigen::MatrixXcd r0_hat_;
};

/// Five-point periodic Laplacian.
Eigen::MatrixXd periodic_laplacian(const Eigen::MatrixXd& a, const PeriodicGrid& grid);

/// Convenience wrapper: propagates to time t with roughly the given Courant
/// number and returns the lab-frame density perturbation.
Eigen::MatrixXd acoustic_propagate(const PeriodicGrid& grid, const AcousticBackground& bg,
                                   const Eigen::MatrixXd& a0, const Eigen::MatrixXd& rate0,
                                   double t, AcousticScheme scheme = AcousticScheme::Leapfrog,
                                   double courant = 0.5);

} // namespace carbuncle

#endif
