#include "carbuncle/output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <stdexcept>

namespace carbuncle {

void write_snapshot_csv(std::ostream& out, const FieldSet& fields, const GasConstants& g) {
  const Grid2D& grid = fields.grid();
  out << "i,j,x,y,rho,u,v,p,E\n";
  out.precision(17);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const PrimitiveState w = fields.primitive(i, j, g);
      out << i << ',' << j << ',' << grid.xc(i) << ',' << grid.yc(j) << ',' << w.rho << ','
          << w.u << ',' << w.v << ',' << w.p << ',' << fields.cell(i, j)[3] << '\n';
    }
  }
}

OutputDirectory::OutputDirectory(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

void OutputDirectory::track(const std::string& name) {
  for (const auto& f : files_) {
    if (f == name) return;
  }
  files_.push_back(name);
}

void OutputDirectory::write_snapshot(const FieldSet& fields, int index, const GasConstants& g) {
  char name[32];
  std::snprintf(name, sizeof name, "snap_%04d.csv", index);
  std::ofstream out(root_ / name);
  if (!out) throw std::runtime_error("cannot write " + (root_ / name).string());
  write_snapshot_csv(out, fields, g);
  track(name);
}

void OutputDirectory::append_diagnostics(const DiagnosticsReport& report) {
  if (!diag_.is_open()) {
    diag_.open(root_ / "diag.csv");
    if (!diag_) throw std::runtime_error("cannot write " + (root_ / "diag.csv").string());
    diag_ << DiagnosticsReport::csv_header() << '\n';
    track("diag.csv");
  }
  diag_ << report.csv_row() << '\n';
  diag_.flush();
}

void OutputDirectory::write_text(const std::string& name, const std::string& contents) {
  std::ofstream out(root_ / name);
  if (!out) throw std::runtime_error("cannot write " + (root_ / name).string());
  out << contents;
  track(name);
}

std::string wall_clock_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm local{};
  localtime_r(&now, &local);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &local);
  return buf;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(12);
  out << "version = " << kVersion << '\n'
      << "command = " << m.command << '\n'
      << "started = " << m.started << '\n'
      << "finished = " << m.finished << '\n'
      << "status = " << m.status << '\n'
      << "exit_code = " << m.exit_code << '\n';
  if (!m.message.empty()) out << "message = " << m.message << '\n';
  out << "\n[config]\n" << m.config_echo;
  out << "\n[metrics]\n";
  for (const auto& [name, value] : m.metrics) out << name << " = " << value << '\n';
  out << "\n[outputs]\n";
  for (const auto& f : m.outputs) out << f << '\n';
}

} // namespace carbuncle
