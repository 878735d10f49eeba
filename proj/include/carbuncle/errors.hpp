#ifndef CARBUNCLE_ERRORS_HPP
#define CARBUNCLE_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace carbuncle {

/// Density or pressure fell below the solver floor. When raised by the
/// finite-volume update the offending interior cell is attached.
class NonPhysicalState : public std::runtime_error {
public:
  explicit NonPhysicalState(const std::string& what)
      : std::runtime_error(what) {}
  NonPhysicalState(const std::string& what, int i, int j)
      : std::runtime_error(what + " at cell (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")"),
        cell_{{i, j}} {}

  std::optional<std::pair<int, int>> cell() const noexcept { return cell_; }

private:
  std::optional<std::pair<int, int>> cell_;
};

class VacuumFormation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NoConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class OnDiscontinuity : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UnboundedDerivatives : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CFLViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class WindowTooSmall : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NoFrontFound : public std::runtime_error {
public:
  NoFrontFound(int row)
      : std::runtime_error("no shock front found in row " +
                           std::to_string(row)),
        row_(row) {}
  int row() const noexcept { return row_; }

private:
  int row_;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace carbuncle

#endif
