#pragma once

#include "ephydro/config.hpp"
#include "ephydro/diagnostics.hpp"
#include "ephydro/stationary.hpp"
#include "ephydro/viscous_solver.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ephydro {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitBlowup = 2,
  kExitBracket = 3,
  kExitConfig = 4,
};

enum class Verbosity { quiet, normal, verbose };

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  Verbosity verbosity = Verbosity::normal;
};

struct SeriesRow {
  double t, mass, phi, lyapunov, max_wbar, min_zbar;
};

/// Everything a single run produces, before serialization.
struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  Trajectory trajectory;
  MollifiedData initial;
  std::optional<StationaryProfile> stationary;
  double M = 0.0;
  double Lambda = 0.0;
  std::vector<DiagnosticRecord> records;
  std::vector<SeriesRow> series;
  /// Per-step Lyapunov values (every solver step, not just snapshots).
  std::optional<LyapunovSeries> lyapunov;
  std::optional<DecayReport> decay;
  std::optional<InvariantRegionReport> region;
  std::optional<DensityBoundReport> density;
  std::vector<std::pair<std::string, EntropyResidualReport>> entropy;
};

/// project_neutral -> mollify -> run -> enabled diagnostics. Never throws for
/// blowup or bracket failure; those map to exit codes.
RunResult execute_run(const ExperimentConfig& cfg, Verbosity verbosity = Verbosity::quiet);

/// L1 space-time distance int int (|n_a - n_b| + |J_a - J_b|) over snapshots taken at common times.
double l1_spacetime_distance(const Trajectory& a, const Trajectory& b);

struct SweepResult {
  int exit_code = kExitOk;
  std::vector<double> epsilons;
  std::vector<double> distances;  // between consecutive epsilons
  bool decreasing = false;
  std::string message;
};

/// Runs every epsilon concurrently on the configured grid. Needs at least three
/// strictly decreasing values; snapshots land on output_interval (T/200 if unset).
SweepResult execute_sweep(const ExperimentConfig& cfg, const std::vector<double>& epsilons,
                          std::vector<Trajectory>* trajectories = nullptr);

MmsReport execute_mms(const ExperimentConfig& cfg, const std::vector<std::size_t>& resolutions);
/// Order threshold for the configured flux: 1.8 central, 0.9 Rusanov.
double mms_required_order(FluxScheme flux);

int cmd_run(const std::filesystem::path& config_path, const RunOptions& opts);
int cmd_stationary(const std::filesystem::path& config_path, const RunOptions& opts);
int cmd_sweep_eps(const std::filesystem::path& config_path, const std::vector<double>& epsilons,
                  const RunOptions& opts);
int cmd_mms(const std::filesystem::path& config_path, const std::vector<std::size_t>& resolutions,
            const RunOptions& opts);

}  // namespace ephydro
