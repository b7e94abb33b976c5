#include "ephydro/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace ephydro {

namespace {

void write_array(std::ostream& os, std::span<const double> v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << format_double(v[i]);
  }
  os << ']';
}

// JSON has no literal for non-finite numbers.
std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void write_snapshot(std::ostream& os, const State& s) {
  os << "{\"t\":" << json_number(s.t) << ",\"n\":";
  write_array(os, s.n);
  os << ",\"J\":";
  write_array(os, s.J);
  os << ",\"E\":";
  write_array(os, s.E.values);
  os << "}\n";
}

void write_snapshots(std::ostream& os, const Trajectory& traj) {
  for (const auto& s : traj.snapshots) write_snapshot(os, s);
}

void write_record(std::ostream& os, const DiagnosticRecord& rec) {
  os << "{\"name\":" << json_string(rec.name) << ",\"pass\":" << (rec.pass ? "true" : "false");
  for (const auto& [key, value] : rec.scalars) os << ',' << json_string(key) << ':' << json_number(value);
  if (rec.worst_x) os << ",\"worst_x\":" << json_number(*rec.worst_x);
  if (rec.worst_t) os << ",\"worst_t\":" << json_number(*rec.worst_t);
  os << "}\n";
}

void write_csv_header(std::ostream& os, std::span<const std::string> columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}

void write_csv_row(std::ostream& os, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_double(values[i]);
  os << '\n';
}

void write_stationary_csv(std::ostream& os, const StationaryProfile& prof) {
  os << "# {\"shoot_residual\":" << json_number(prof.shoot_residual) << ",\"iterations\":" << prof.iterations
     << ",\"N\":" << (prof.N_tilde.empty() ? 0 : prof.N_tilde.size() - 1) << "}\n";
  os << "x,N_tilde,E_tilde\n";
  for (std::size_t i = 0; i < prof.N_tilde.size(); ++i) {
    const double row[] = {static_cast<double>(i) * prof.dx, prof.N_tilde[i], prof.E_tilde[i]};
    write_csv_row(os, row);
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace ephydro
