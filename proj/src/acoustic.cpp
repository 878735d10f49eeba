#include "carbuncle/acoustic.hpp"
#include "carbuncle/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace carbuncle {

namespace {

using Spectrum = Eigen::MatrixXcd;

Spectrum fft2(const Eigen::MatrixXd& a) {
  Eigen::FFT<double> fft;
  Spectrum out(a.rows(), a.cols());
  Eigen::VectorXcd line_in, line_out;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    line_in = a.row(j).transpose().cast<std::complex<double>>();
    fft.fwd(line_out, line_in);
    out.row(j) = line_out.transpose();
  }
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    line_in = out.col(i);
    fft.fwd(line_out, line_in);
    out.col(i) = line_out;
  }
  return out;
}

Eigen::MatrixXd ifft2_real(Spectrum s) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd line_in, line_out;
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    line_in = s.col(i);
    fft.inv(line_out, line_in);
    s.col(i) = line_out;
  }
  for (Eigen::Index j = 0; j < s.rows(); ++j) {
    line_in = s.row(j).transpose();
    fft.inv(line_out, line_in);
    s.row(j) = line_out.transpose();
  }
  return s.real();
}

double wavenumber(int index, int n, double length) {
  const int m = index <= n / 2 ? index : index - n;
  return 2.0 * std::numbers::pi * m / length;
}

} // namespace

void PeriodicGrid::validate() const {
  if (nx < 2 || ny < 2 || !(lx > 0.0) || !(ly > 0.0)) {
    throw std::invalid_argument("periodic grid needs nx, ny >= 2 and positive lengths");
  }
}

Eigen::MatrixXd periodic_laplacian(const Eigen::MatrixXd& a, const PeriodicGrid& grid) {
  const Eigen::Index ny = a.rows();
  const Eigen::Index nx = a.cols();
  const double ix2 = 1.0 / (grid.dx() * grid.dx());
  const double iy2 = 1.0 / (grid.dy() * grid.dy());
  Eigen::MatrixXd out(ny, nx);
  for (Eigen::Index i = 0; i < nx; ++i) {
    const Eigen::Index ip = (i + 1) % nx;
    const Eigen::Index im = (i + nx - 1) % nx;
    for (Eigen::Index j = 0; j < ny; ++j) {
      const Eigen::Index jp = (j + 1) % ny;
      const Eigen::Index jm = (j + ny - 1) % ny;
      out(j, i) = (a(j, ip) - 2.0 * a(j, i) + a(j, im)) * ix2 +
                  (a(jp, i) - 2.0 * a(j, i) + a(jm, i)) * iy2;
    }
  }
  return out;
}

double AcousticPropagator::max_stable_dt(const PeriodicGrid& grid, double c0) {
  return 1.0 / (c0 * std::sqrt(1.0 / (grid.dx() * grid.dx()) + 1.0 / (grid.dy() * grid.dy())));
}

AcousticPropagator::AcousticPropagator(const PeriodicGrid& grid, const AcousticBackground& bg,
                                       const Eigen::MatrixXd& a0, const Eigen::MatrixXd& rate0,
                                       double dt, AcousticScheme scheme)
    : grid_(grid), bg_(bg), scheme_(scheme), dt_(dt), a_(a0) {
  grid_.validate();
  if (a0.rows() != grid.ny || a0.cols() != grid.nx || rate0.rows() != grid.ny ||
      rate0.cols() != grid.nx) {
    throw std::invalid_argument("initial data do not match the grid");
  }
  if (!(bg.c0 > 0.0)) throw std::invalid_argument("sound speed must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");

  if (scheme_ == AcousticScheme::Leapfrog) {
    if (dt > max_stable_dt(grid, bg.c0)) {
      throw CFLViolation("leapfrog time step exceeds the stability limit");
    }
    // Backward Taylor level so that the first step is second-order accurate.
    const double c2 = bg.c0 * bg.c0;
    aux_ = a0 - dt * rate0 + 0.5 * dt * dt * c2 * periodic_laplacian(a0, grid_);
  } else {
    a0_hat_ = fft2(a0);
    r0_hat_ = fft2(rate0);
  }
}

void AcousticPropagator::step() {
  if (scheme_ == AcousticScheme::Leapfrog) {
    const double c2 = bg_.c0 * bg_.c0;
    Eigen::MatrixXd next = 2.0 * a_ - aux_ + dt_ * dt_ * c2 * periodic_laplacian(a_, grid_);
    aux_.swap(a_);
    a_.swap(next);
    ++steps_;
    time_ = steps_ * dt_;
    return;
  }
  ++steps_;
  time_ = steps_ * dt_;
  // Each mode is evaluated from the initial data, so no error accumulates.
  const Spectrum& a0 = a0_hat_;
  const Spectrum& r0 = r0_hat_;
  Spectrum at(grid_.ny, grid_.nx);
  for (int j = 0; j < grid_.ny; ++j) {
    const double ky = wavenumber(j, grid_.ny, grid_.ly);
    for (int i = 0; i < grid_.nx; ++i) {
      const double kx = wavenumber(i, grid_.nx, grid_.lx);
      const double w = bg_.c0 * std::hypot(kx, ky);
      at(j, i) = w == 0.0 ? a0(j, i) + r0(j, i) * time_
                          : a0(j, i) * std::cos(w * time_) + r0(j, i) * (std::sin(w * time_) / w);
    }
  }
  a_ = ifft2_real(at);
}

void AcousticPropagator::advance(int steps) {
  for (int n = 0; n < steps; ++n) step();
}

double AcousticPropagator::energy() const {
  const double cell = grid_.dx() * grid_.dy();
  const double c2 = bg_.c0 * bg_.c0;
  if (scheme_ == AcousticScheme::Leapfrog) {
    const double kinetic = ((a_ - aux_) / dt_).squaredNorm();
    const double potential = -c2 * a_.cwiseProduct(periodic_laplacian(aux_, grid_)).sum();
    return 0.5 * (kinetic + potential) * cell;
  }
  const Spectrum& a0 = a0_hat_;
  const Spectrum& r0 = r0_hat_;
  double sum = 0.0;
  for (int j = 0; j < grid_.ny; ++j) {
    const double ky = wavenumber(j, grid_.ny, grid_.ly);
    for (int i = 0; i < grid_.nx; ++i) {
      const double kx = wavenumber(i, grid_.nx, grid_.lx);
      const double w = bg_.c0 * std::hypot(kx, ky);
      std::complex<double> a = a0(j, i), rate = r0(j, i);
      if (w == 0.0) {
        a += rate * time_;
      } else {
        const double cs = std::cos(w * time_), sn = std::sin(w * time_);
        a = a0(j, i) * cs + r0(j, i) * (sn / w);
        rate = -a0(j, i) * (w * sn) + r0(j, i) * cs;
      }
      sum += std::norm(rate) + w * w * std::norm(a);
    }
  }
  return 0.5 * sum * cell / (static_cast<double>(grid_.nx) * grid_.ny);
}

Eigen::MatrixXd AcousticPropagator::lab_field() const {
  if (bg_.u0 == 0.0 && bg_.v0 == 0.0) return a_;
  Spectrum s = fft2(a_);
  const double sx = bg_.u0 * time_;
  const double sy = bg_.v0 * time_;
  for (int j = 0; j < grid_.ny; ++j) {
    const double ky = wavenumber(j, grid_.ny, grid_.ly);
    for (int i = 0; i < grid_.nx; ++i) {
      const double kx = wavenumber(i, grid_.nx, grid_.lx);
      s(j, i) *= std::polar(1.0, -(kx * sx + ky * sy));
    }
  }
  return ifft2_real(std::move(s));
}

Eigen::MatrixXd acoustic_propagate(const PeriodicGrid& grid, const AcousticBackground& bg,
                                   const Eigen::MatrixXd& a0, const Eigen::MatrixXd& rate0,
                                   double t, AcousticScheme scheme, double courant) {
  if (t <= 0.0) return a0;
  const double limit = courant * AcousticPropagator::max_stable_dt(grid, bg.c0);
  const int steps = static_cast<int>(std::ceil(t / limit));
  AcousticPropagator prop(grid, bg, a0, rate0, t / steps, scheme);
  prop.advance(steps);
  return prop.lab_field();
}

} // namespace carbuncle
