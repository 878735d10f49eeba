#ifndef CARBUNCLE_OUTPUT_HPP
#define CARBUNCLE_OUTPUT_HPP

#include "carbuncle/diagnostics.hpp"
#include "carbuncle/fv_solver.hpp"

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace carbuncle {

inline constexpr std::string_view kVersion = "0.3.1";

/// "i,j,x,y,rho,u,v,p,E" rows for every interior cell, row-major.
void write_snapshot_csv(std::ostream& out, const FieldSet& fields, const GasConstants& g);

/// An experiment's output directory. Every file written through it is
/// recorded so the manifest can list it.
class OutputDirectory {
public:
  explicit OutputDirectory(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  const std::vector<std::string>& files() const { return files_; }

  /// Writes snap_NNNN.csv.
  void write_snapshot(const FieldSet& fields, int index, const GasConstants& g);

  /// Appends one row to diag.csv (header on first use) and flushes, so a
  /// run that dies part-way leaves every completed row on disk.
  void append_diagnostics(const DiagnosticsReport& report);

  /// Writes an arbitrary text file.
  void write_text(const std::string& name, const std::string& contents);

private:
  void track(const std::string& name);

  std::filesystem::path root_;
  std::vector<std::string> files_;
  std::ofstream diag_;
};

struct RunManifest {
  std::string command;
  std::string config_echo;
  std::string started;
  std::string finished;
  std::string status;
  std::string message;
  int exit_code{0};
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> outputs;
};

/// Local wall-clock time, ISO 8601.
std::string wall_clock_now();

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

} // namespace carbuncle

#endif
