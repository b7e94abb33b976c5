#pragma once

#include "ephydro/diagnostics.hpp"
#include "ephydro/stationary.hpp"
#include "ephydro/viscous_solver.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace ephydro {

/// 17 significant digits, enough for an exact round trip. Non-finite values
/// print as nan / inf / -inf.
std::string format_double(double v);

/// One JSON object per snapshot: {"t": ..., "n": [...], "J": [...], "E": [...]}.
void write_snapshot(std::ostream& os, const State& s);
void write_snapshots(std::ostream& os, const Trajectory& traj);

/// {"name": ..., "pass": ..., <scalars>..., "worst_x": ..., "worst_t": ...}
void write_record(std::ostream& os, const DiagnosticRecord& rec);

void write_csv_header(std::ostream& os, std::span<const std::string> columns);
void write_csv_row(std::ostream& os, std::span<const double> values);

/// Header line "# {json}" followed by x,N_tilde,E_tilde rows.
void write_stationary_csv(std::ostream& os, const StationaryProfile& prof);

/// Opens `path` for writing, creating parent directories; throws std::runtime_error on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace ephydro
