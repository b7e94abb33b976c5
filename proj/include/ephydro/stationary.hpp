#pragma once

#include "ephydro/doping.hpp"
#include "ephydro/gas_model.hpp"

#include <cstddef>
#include <vector>

namespace ephydro {

/// Steady density and field with p(N)_x = N E, E_x = N - D, E(0) = E(1) = 0.
struct StationaryProfile {
  std::vector<double> N_tilde;
  std::vector<double> E_tilde;
  double dx = 0.0;
  /// |E(1)| reached by the accepted trial.
  double shoot_residual = 0.0;
  std::size_t iterations = 0;
};

enum class ShotOutcome {
  ok,
  /// Density fell below D_* / 10: the trial boundary density is too small.
  collapsed,
  /// Density overflowed: the trial boundary density is too large.
  diverged,
};

struct ShotResult {
  StationaryProfile profile;
  double residual = 0.0;  // E(1); -inf / +inf for collapsed / diverged trials
  ShotOutcome outcome = ShotOutcome::ok;
};

/// Integrates N' = E N^{2-gamma} / (p0 gamma), E' = N - D from (N0, 0) with
/// classical RK4 on `cells` uniform steps.
ShotResult shoot(double N0, const DopingProfile& doping, const GasModel& m, std::size_t cells);

struct StationaryOptions {
  double tol = 1e-10;
  std::size_t max_iterations = 200;
};

/// Bisection on N(0) over [D_* / 2, 2 D^*] until |E(1)| <= tol.
/// Throws BracketError when the end residuals share a sign.
StationaryProfile solve_stationary(const DopingProfile& doping, const GasModel& m, std::size_t cells,
                                   StationaryOptions opts = {});

}  // namespace ephydro
