#pragma once

#include "ephydro/doping.hpp"
#include "ephydro/errors.hpp"
#include "ephydro/gas_model.hpp"
#include "ephydro/poisson.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ephydro {

enum class FluxScheme { central, rusanov };
enum class RelaxationTreatment { explicit_euler, exponential };
/// zero_flux: n_x = 0 at both ends (mass conserving); dirichlet: n pinned to the mollified end values.
enum class BoundaryCondition { zero_flux, dirichlet };

struct SolverConfig {
  GasModel model = GasModel::from_gamma(2.0);
  double epsilon = 1e-3;
  std::size_t cells = 400;
  double t_final = 1.0;
  double cfl_safety = 0.9;
  /// Positivity floor; a negative value means epsilon / 2.
  double n_floor = -1.0;
  std::size_t output_stride = 1;
  /// When positive, snapshots are taken at multiples of this time (steps are shortened to land on them).
  double output_interval = 0.0;
  FluxScheme flux = FluxScheme::central;
  RelaxationTreatment relaxation = RelaxationTreatment::explicit_euler;
  BoundaryCondition boundary = BoundaryCondition::zero_flux;
  /// Abort once clamp events exceed this fraction of cells * steps.
  double clamp_fraction = 1e-3;

  double floor() const noexcept { return n_floor < 0.0 ? 0.5 * epsilon : n_floor; }
  double dx() const noexcept { return 1.0 / static_cast<double>(cells); }
  /// Throws DomainError for out-of-range fields.
  void validate() const;
};

struct State {
  double t = 0.0;
  std::vector<double> n;
  std::vector<double> J;
  FieldGrid E;
};

struct StepRecord {
  double t;
  double dt;
  double mass;
  std::size_t clamps;
};

struct Trajectory {
  double dx = 0.0;
  std::vector<State> snapshots;
  /// One record per step, preceded by the initial state (dt = 0).
  std::vector<StepRecord> steps;
  std::size_t clamp_events = 0;
};

/// Blowup during run(); carries the trajectory recorded so far.
class SimulationBlowup : public BlowupError {
 public:
  SimulationBlowup(const BlowupError& cause, Trajectory partial)
      : BlowupError(cause), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

struct MollifiedData {
  std::vector<double> n;
  std::vector<double> J;
  double n_left;
  double n_right;
  std::size_t half_width;
  /// The requested width was below three cells and got widened.
  bool width_clamped;
};

/// (n0 + epsilon, J0) convolved with a normalized triangular kernel of half-width
/// max(3, round(epsilon / dx)) cells. The density is extended evenly and the
/// current oddly across both ends, which preserves constants and the trapezoid
/// mass exactly; J is zero at both ends of the result.
MollifiedData mollify_initial(std::span<const double> n0, std::span<const double> J0, double epsilon,
                              double dx);

/// Adds a source term evaluated at time t to the density and current right-hand sides.
using Forcing = std::function<void(double t, std::span<double> rhs_n, std::span<double> rhs_J)>;

State make_state(double t, std::vector<double> n, std::vector<double> J, std::span<const double> doping,
                 double dx);

/// Explicit integrator for
///   n_t + J_x = eps n_xx
///   J_t + (J^2/n + p(n))_x = eps J_xx + n E - J - 2 eps n_x
/// on the uniform grid with J = 0 at both ends.
class ViscousSolver {
 public:
  ViscousSolver(SolverConfig cfg, const DopingProfile& doping);

  const SolverConfig& config() const noexcept { return cfg_; }
  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> doping() const noexcept { return doping_; }

  void set_forcing(Forcing forcing) { forcing_ = std::move(forcing); }

  State initial_state(std::vector<double> n, std::vector<double> J) const;

  double cfl_dt(const State& s) const;
  /// Step actually taken by run(): cfl_dt further capped by the combined
  /// advection-diffusion limit of the chosen flux (see stable_dt).
  double step_dt(const State& s) const;

  /// One explicit step. `clamps`, when given, accumulates positivity clamp events.
  State step(const State& s, double dt, std::size_t* clamps = nullptr) const;

  using Observer = std::function<void(const State&)>;

  /// Integrates from the given (already mollified) data to t_final. The observer,
  /// if any, sees the initial state and every subsequent step.
  Trajectory run(std::vector<double> n_init, std::vector<double> J_init,
                 const Observer& observer = {}) const;

 private:
  void rhs(const State& s, std::vector<double>& rn, std::vector<double>& rj) const;

  SolverConfig cfg_;
  Grid grid_;
  std::vector<double> doping_;
  Forcing forcing_;
};

double cfl_dt(const State& state, const SolverConfig& cfg, double dx);
/// cfl_dt alone bounds advection and diffusion separately, which is not enough
/// once they are comparable. This adds the joint limits, scaled by cfl_safety:
///   central:  dt <= 2 eps / a^2           (von Neumann bound for centred advection-diffusion)
///   rusanov:  dt <= 1 / (a/dx + 2 eps/dx^2)  (monotone Lax-Friedrichs plus diffusion)
double stable_dt(const State& state, const SolverConfig& cfg, double dx);
State step(const State& state, const SolverConfig& cfg, const DopingProfile& doping, double dt);
Trajectory run(const SolverConfig& cfg, const DopingProfile& doping, std::span<const double> n_init,
               std::span<const double> J_init);

/// Projects n0 to neutrality, mollifies, and projects again to cancel the epsilon lift;
/// the standard path from user data to solver input.
MollifiedData prepare_initial(std::span<const double> n0, std::span<const double> J0,
                              const DopingProfile& doping, double epsilon, double dx);

class ManufacturedSolution;

struct MmsReport {
  std::vector<std::size_t> cells;
  std::vector<double> errors;
  /// Least-squares slope of log(error) against log(dx); meaningless when `exact`.
  double order = 0.0;
  bool exact = false;
  bool monotone = true;
  std::string message;
};

/// Runs the template configuration at each resolution with the manufactured
/// forcing, measuring the discrete L2 error of (n, J) at t_final.
MmsReport mms_convergence(const SolverConfig& base, const DopingProfile& doping,
                          const ManufacturedSolution& exact, std::span<const std::size_t> resolutions);

std::string to_string(FluxScheme s);
std::string to_string(RelaxationTreatment r);
std::string to_string(BoundaryCondition b);

}  // namespace ephydro
