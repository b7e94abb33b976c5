#pragma once

#include "ephydro/diagnostics.hpp"
#include "ephydro/doping.hpp"
#include "ephydro/viscous_solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ephydro {

/// Initial-data field: doping-match | constant:<v> | sine:<mean>:<amp>:<freq> | table:<path>.
/// Unlike a doping profile, the values may take any sign.
struct FieldSpec {
  enum class Kind { doping_match, constant, sine, table };
  Kind kind = Kind::constant;
  double value = 0.0;
  double mean = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::string text = "constant:0";

  static FieldSpec parse(std::string_view spec, const std::filesystem::path& base_dir = {});
  std::vector<double> sample(const Grid& grid, const DopingProfile& doping) const;
};

enum class Check { mass, invariant_region, density_bound, region_signs, entropy, coercivity, lyapunov, decay };

std::string to_string(Check c);
std::vector<Check> all_checks();

struct DiagnosticsConfig {
  std::vector<Check> checks = all_checks();
  /// Region parameter override; choose_M when absent.
  std::optional<double> region_M;
  std::optional<double> region_tol;
  FitWindow fit_window{2.0, 18.0};
  TestGridSpec entropy_grid{};
  /// Weak entropy generator power p in g(xi) = xi^p; 0 disables the weak pair.
  int weak_power = 4;
  /// Lyapunov weight; D^* + max n + lambda_margin when absent.
  std::optional<double> lambda;
  double lambda_margin = 1.5;
  double lyapunov_tol = 1e-8;
  std::size_t coercivity_samples = 100;
  /// Stationary grid; the solver grid when zero.
  std::size_t stationary_cells = 0;
  double stationary_tol = 1e-10;

  bool enabled(Check c) const;
};

struct MmsConfig {
  /// trig | constant
  std::string solution = "trig";
  std::vector<std::size_t> resolutions{100, 200, 400};
};

struct ExperimentConfig {
  std::string doping_spec = "constant:1";
  DopingProfile doping = DopingProfile::constant(1.0);
  FieldSpec n0 = FieldSpec::parse("doping-match");
  FieldSpec J0 = FieldSpec::parse("constant:0");
  SolverConfig solver;
  DiagnosticsConfig diagnostics;
  MmsConfig mms;
  std::filesystem::path out_dir = "out";
  /// Directory of the config file; relative table paths resolve against it.
  std::filesystem::path base_dir;

  std::size_t stationary_cells() const {
    return diagnostics.stationary_cells ? diagnostics.stationary_cells : solver.cells;
  }
};

/// Parses the flat key = value format with optional [section] headers.
/// Throws ConfigError listing every problem found.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Comma-separated lists as used by the CLI.
std::vector<double> parse_double_list(std::string_view text);
std::vector<std::size_t> parse_size_list(std::string_view text);

}  // namespace ephydro
