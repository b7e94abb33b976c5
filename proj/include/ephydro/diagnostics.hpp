#pragma once

#include "ephydro/doping.hpp"
#include "ephydro/gas_model.hpp"
#include "ephydro/stationary.hpp"
#include "ephydro/viscous_solver.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ephydro {

// ---------------------------------------------------------------------------
// Invariant region {w <= M + x, z >= -(M - x)}

/// Region parameter large enough that the modified invariants start inside the
/// region and the source terms have the signs the maximum principle needs:
///   M = max(sup(w0 - x), sup(x - z0), (M0 + 2) / theta) + 1,  M0 = int n0 + int D + 1.
/// Expects mollified (strictly positive) initial data.
double choose_M(std::span<const double> n0, std::span<const double> J0, const DopingProfile& doping,
                const GasModel& m, double dx);

/// Surrogate field bound M0 = int n0 + int D + 1 used by choose_M.
double field_bound_surrogate(std::span<const double> n0, const DopingProfile& doping, double dx);

struct InvariantRegionReport {
  double M = 0.0;
  double tol = 0.0;
  std::vector<double> times;
  /// Per snapshot: max over x of w - (M + x) and min over x of z + (M - x).
  std::vector<double> max_wbar;
  std::vector<double> min_zbar;
  std::optional<double> first_violation;
  std::size_t indeterminate = 0;  // vacuum nodes skipped
  double worst_x = 0.0;
  double worst_t = 0.0;
  bool pass = false;
};

/// Default tolerance 1e-6 + 10 dx^2.
InvariantRegionReport invariant_region_check(const Trajectory& traj, const GasModel& m, double M,
                                             std::optional<double> tol = std::nullopt);

struct DensityBoundReport {
  double max_n = 0.0;
  double bound = 0.0;  // ((3/2) M)^{1/theta}
  double invariant_bound = 0.0;  // max |w|, |z| observed
  double max_velocity = 0.0;     // max |J| / n observed
  bool pass = false;
};

DensityBoundReport density_bound_check(const Trajectory& traj, const GasModel& m, double M);

struct RegionSignReport {
  double a12 = 0.0;
  double a21 = 0.0;
  double max_R1 = 0.0;
  double min_R2 = 0.0;
  bool pass = false;
};

/// Evaluates the coupling coefficients and the source terms R1, R2 of the
/// modified-invariant system at every node of every snapshot, with n_x from
/// central differences.
RegionSignReport region_sign_check(const Trajectory& traj, const GasModel& m, double M, double epsilon);

// ---------------------------------------------------------------------------
// Entropy inequality in weak form

struct EntropyPairSource {
  enum class Kind { mechanical, weak };
  Kind kind = Kind::mechanical;
  EntropyGenerator generator;
  std::string name = "mechanical";

  static EntropyPairSource mechanical();
  static EntropyPairSource weak(EntropyGenerator gen, std::string name);

  EntropyPairValue evaluate(const GasModel& m, FluidPoint pt) const;
};

struct TestGridSpec {
  std::size_t space = 5;
  std::size_t time = 5;
  double c_trunc = 10.0;
  /// Minimum snapshots across half of a bump's time support.
  std::size_t min_samples = 8;
};

struct EntropyResidualReport {
  std::vector<double> x_centers;
  std::vector<double> t_centers;
  /// Row-major [time][space]; each entry int int (eta psi_t + q psi_x + eta_J (nE - J) psi).
  std::vector<double> residuals;
  double worst = 0.0;
  double worst_x = 0.0;
  double worst_t = 0.0;
  double dt_mean = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Smooth bump (1 - r^2)^4 on |r| < 1 and its derivative in r.
double bump(double r);
double bump_derivative(double r);

EntropyResidualReport entropy_residual(const Trajectory& traj, const GasModel& m, const EntropyPairSource& pair,
                                       const TestGridSpec& spec = {});

// ---------------------------------------------------------------------------
// Relative entropy, Lyapunov functional and decay

struct Interval {
  double lo;
  double hi;
};

struct CoercivityReport {
  double C1 = 0.0;
  double C2 = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
};

/// C1 = min p', C2 = max p' over the hull of both intervals; verifies
/// C1 (n - N)^2 <= (p(n) - p(N)) (n - N) <= C2 (n - N)^2 on a samples x samples grid.
CoercivityReport coercivity_constants(Interval n_range, Interval N_range, const GasModel& m,
                                      std::size_t samples = 100);

/// Trapezoid integral of (n - N)^2 + (E - E~)^2 + J^2.
double decay_functional(const State& state, const StationaryProfile& stat);

/// Lambda eta_* + Lambda y^2/2 + y y_t + y^2/2 integrated over [0, 1] with y = -(E - E~), y_t = J.
double lyapunov_value(const State& state, const StationaryProfile& stat, const GasModel& m, double Lambda);

/// Smallest admissible Lambda is strictly above D^* + max n + 1.
void require_lyapunov_weight(double Lambda, double doping_upper, double max_density);

struct LyapunovSeries {
  double Lambda = 0.0;
  double tol_rel = 1e-8;
  std::vector<double> times;
  std::vector<double> values;
  std::size_t increases = 0;
  double max_increase = 0.0;  // largest L_{k+1} - L_k, relative to L(0)
};

/// L splits as Lambda * weighted + rest with weighted = int (eta_* + y^2/2) and
/// rest = int (y y_t + y^2/2), so one pass serves every Lambda.
struct LyapunovSplit {
  double weighted = 0.0;
  double rest = 0.0;
};

LyapunovSplit lyapunov_split(const State& state, const StationaryProfile& stat, const GasModel& m);

/// Accumulates the split one state at a time (usable as a solver observer, so
/// that monotonicity can be checked per step); Lambda is chosen afterwards,
/// once the largest density is known.
class LyapunovMonitor {
 public:
  LyapunovMonitor(const StationaryProfile& stat, const GasModel& m);

  void observe(const State& s);
  double max_density() const noexcept { return max_n_; }
  std::size_t size() const noexcept { return times_.size(); }

  /// Increases are counted where L_{k+1} - L_k > tol_rel * L_0.
  LyapunovSeries series(double Lambda, double tol_rel = 1e-8) const;

 private:
  const StationaryProfile* stat_;
  GasModel model_;
  std::vector<double> times_;
  std::vector<LyapunovSplit> splits_;
  double max_n_ = 0.0;
};

LyapunovSeries lyapunov(const Trajectory& traj, const StationaryProfile& stat, const GasModel& m,
                        double Lambda, double doping_upper, double tol_rel = 1e-8);

struct FitWindow {
  double t0;
  double t1;
};

struct DecayReport {
  std::vector<double> times;
  std::vector<double> values;
  double rate = 0.0;       // c
  double prefactor = 0.0;  // C
  double r2 = 0.0;
  FitWindow window{0.0, 0.0};
  std::size_t samples = 0;
  bool pass = false;
};

/// Least-squares fit of log(Phi) = log(C) - c t over the window, stopping at the
/// numerical floor 1e-14 Phi(first). Passes iff c > 0 and R^2 >= 0.98.
DecayReport fit_decay_rate(std::span<const double> times, std::span<const double> values, FitWindow window);

struct MassReport {
  std::vector<double> times;
  std::vector<double> masses;
  double max_drift = 0.0;
};

MassReport mass_series(const Trajectory& traj);

/// Largest |y_a - y_b| between y = -(E - E~) and the cumulative integral of -(n - N).
double y_identity_defect(const State& state, const StationaryProfile& stat);

struct Comparability {
  double lower = 0.0;  // min L / Phi
  double upper = 0.0;  // max L / Phi
};

Comparability lyapunov_comparability(std::span<const double> phi, std::span<const double> lyap);

// ---------------------------------------------------------------------------

/// Flat record for NDJSON reports.
struct DiagnosticRecord {
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, double>> scalars;
  std::optional<double> worst_x;
  std::optional<double> worst_t;
};

DiagnosticRecord to_record(const InvariantRegionReport& r);
DiagnosticRecord to_record(const DensityBoundReport& r);
DiagnosticRecord to_record(const RegionSignReport& r);
DiagnosticRecord to_record(const EntropyResidualReport& r, const std::string& pair_name);
DiagnosticRecord to_record(const CoercivityReport& r);
DiagnosticRecord to_record(const LyapunovSeries& r);
DiagnosticRecord to_record(const DecayReport& r);
DiagnosticRecord to_record(const MassReport& r);

}  // namespace ephydro
