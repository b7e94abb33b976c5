#include "ephydro/viscous_solver.hpp"

#include "ephydro/manufactured.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ephydro {

namespace {

constexpr std::size_t kMinKernelHalfWidth = 3;

// Index and sign of node j in the 2N-periodic even (density) or odd (current) extension.
std::pair<std::size_t, double> fold(long long j, long long cells) {
  const long long period = 2 * cells;
  long long r = ((j % period) + period) % period;
  if (r <= cells) return {static_cast<std::size_t>(r), 1.0};
  return {static_cast<std::size_t>(period - r), -1.0};
}

double total_mass(std::span<const double> n, double dx) { return trapezoid(n, dx); }

}  // namespace

void SolverConfig::validate() const {
  std::ostringstream problems;
  if (!(epsilon > 0.0)) problems << "epsilon must be positive; ";
  if (cells < 16) problems << "N must be at least 16; ";
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) problems << "T_final must be finite and >= 0; ";
  if (!(cfl_safety > 0.0 && cfl_safety <= 0.9)) problems << "cfl_safety must lie in (0, 0.9]; ";
  if (output_stride == 0) problems << "output_stride must be positive; ";
  if (!(output_interval >= 0.0)) problems << "output_interval must be >= 0; ";
  if (n_floor >= 0.0 && !(n_floor > 0.0)) problems << "n_floor must be positive; ";
  const auto text = problems.str();
  if (!text.empty()) throw DomainError("invalid solver configuration: " + text);
}

std::string to_string(FluxScheme s) { return s == FluxScheme::central ? "central" : "rusanov"; }
std::string to_string(RelaxationTreatment r) {
  return r == RelaxationTreatment::explicit_euler ? "explicit" : "exponential";
}
std::string to_string(BoundaryCondition b) {
  return b == BoundaryCondition::zero_flux ? "zero-flux" : "dirichlet";
}

MollifiedData mollify_initial(std::span<const double> n0, std::span<const double> J0, double epsilon,
                              double dx) {
  require_conforming(n0, J0, "mollify_initial");
  if (n0.size() < 2) throw ShapeError("mollify_initial: need at least two nodes");
  if (std::any_of(n0.begin(), n0.end(), [](double v) { return !(v >= 0.0); }))
    throw DomainError("mollify_initial: initial density must be nonnegative");

  const long long cells = static_cast<long long>(n0.size()) - 1;
  const auto requested = static_cast<std::size_t>(std::llround(epsilon / dx));
  std::size_t h = std::max(requested, kMinKernelHalfWidth);
  h = std::min<std::size_t>(h, static_cast<std::size_t>(cells));

  std::vector<double> kernel(2 * h + 1);
  for (std::size_t k = 0; k < kernel.size(); ++k) {
    const double offset = std::abs(static_cast<double>(k) - static_cast<double>(h));
    kernel[k] = static_cast<double>(h) + 1.0 - offset;
  }
  const double norm = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  for (double& k : kernel) k /= norm;

  MollifiedData out;
  out.n.assign(n0.size(), 0.0);
  out.J.assign(n0.size(), 0.0);
  for (long long i = 0; i <= cells; ++i) {
    double sn = 0.0, sj = 0.0;
    for (std::size_t k = 0; k < kernel.size(); ++k) {
      const long long j = i + static_cast<long long>(k) - static_cast<long long>(h);
      const auto [idx, sign] = fold(j, cells);
      sn += kernel[k] * (n0[idx] + epsilon);
      sj += kernel[k] * sign * J0[idx];
    }
    out.n[static_cast<std::size_t>(i)] = sn;
    out.J[static_cast<std::size_t>(i)] = sj;
  }
  out.J.front() = 0.0;
  out.J.back() = 0.0;
  out.n_left = out.n.front();
  out.n_right = out.n.back();
  out.half_width = h;
  out.width_clamped = requested < kMinKernelHalfWidth;
  return out;
}

MollifiedData prepare_initial(std::span<const double> n0, std::span<const double> J0,
                              const DopingProfile& doping, double epsilon, double dx) {
  const auto neutral = project_neutral(n0, doping, dx);
  auto data = mollify_initial(neutral.n, J0, epsilon, dx);
  // The epsilon lift adds epsilon to the mass; restore neutrality so that
  // equilibrium data stays an exact fixed point.
  data.n = project_neutral(data.n, doping, dx).n;
  data.n_left = data.n.front();
  data.n_right = data.n.back();
  return data;
}

State make_state(double t, std::vector<double> n, std::vector<double> J, std::span<const double> doping,
                 double dx) {
  State s;
  s.t = t;
  s.E = field_from_density(n, doping, dx);
  s.n = std::move(n);
  s.J = std::move(J);
  return s;
}

ViscousSolver::ViscousSolver(SolverConfig cfg, const DopingProfile& doping)
    : cfg_(std::move(cfg)), grid_(cfg_.cells), doping_(doping.sample(grid_)) {
  cfg_.validate();
}

State ViscousSolver::initial_state(std::vector<double> n, std::vector<double> J) const {
  if (n.size() != grid_.nodes() || J.size() != grid_.nodes())
    throw ShapeError("initial data does not match the solver grid");
  return make_state(0.0, std::move(n), std::move(J), doping_, grid_.dx());
}

double ViscousSolver::cfl_dt(const State& s) const { return ephydro::cfl_dt(s, cfg_, grid_.dx()); }
double ViscousSolver::step_dt(const State& s) const { return stable_dt(s, cfg_, grid_.dx()); }

// Right-hand sides without the -J relaxation term.
void ViscousSolver::rhs(const State& s, std::vector<double>& rn, std::vector<double>& rj) const {
  const auto& m = cfg_.model;
  const std::size_t last = s.n.size() - 1;
  const double dx = grid_.dx();
  const double eps = cfg_.epsilon;
  const auto& n = s.n;
  const auto& J = s.J;
  const auto& E = s.E.values;

  std::vector<double> flux(n.size());
  for (std::size_t i = 0; i <= last; ++i) flux[i] = J[i] * J[i] / n[i] + m.p0 * std::pow(n[i], m.gamma);

  rn.assign(n.size(), 0.0);
  rj.assign(n.size(), 0.0);

  if (cfg_.flux == FluxScheme::central) {
    for (std::size_t i = 1; i < last; ++i) {
      rn[i] = -(J[i + 1] - J[i - 1]) / (2.0 * dx);
      rj[i] = -(flux[i + 1] - flux[i - 1]) / (2.0 * dx);
    }
    rn[0] = -J[1] / dx;
    rn[last] = J[last - 1] / dx;
  } else {
    // Rusanov interface fluxes H_{i+1/2} for i = 0..last-1.
    std::vector<double> hn(last), hj(last);
    for (std::size_t i = 0; i < last; ++i) {
      const double a = std::max(max_wave_speed(m, {n[i], J[i]}), max_wave_speed(m, {n[i + 1], J[i + 1]}));
      hn[i] = 0.5 * (J[i] + J[i + 1]) - 0.5 * a * (n[i + 1] - n[i]);
      hj[i] = 0.5 * (flux[i] + flux[i + 1]) - 0.5 * a * (J[i + 1] - J[i]);
    }
    for (std::size_t i = 1; i < last; ++i) {
      rn[i] = -(hn[i] - hn[i - 1]) / dx;
      rj[i] = -(hj[i] - hj[i - 1]) / dx;
    }
    // Mirror ghosts make the outer interface flux the negative of the inner one.
    rn[0] = -2.0 * hn[0] / dx;
    rn[last] = 2.0 * hn[last - 1] / dx;
  }

  const double inv_dx2 = 1.0 / (dx * dx);
  for (std::size_t i = 1; i < last; ++i) {
    rn[i] += eps * (n[i + 1] - 2.0 * n[i] + n[i - 1]) * inv_dx2;
    rj[i] += eps * (J[i + 1] - 2.0 * J[i] + J[i - 1]) * inv_dx2 + n[i] * E[i] -
             eps * (n[i + 1] - n[i - 1]) / dx;
  }
  rn[0] += 2.0 * eps * (n[1] - n[0]) * inv_dx2;
  rn[last] += 2.0 * eps * (n[last - 1] - n[last]) * inv_dx2;

  if (forcing_) forcing_(s.t, rn, rj);
}

State ViscousSolver::step(const State& s, double dt, std::size_t* clamps) const {
  std::vector<double> rn, rj;
  rhs(s, rn, rj);

  const std::size_t last = s.n.size() - 1;
  std::vector<double> n(s.n.size()), J(s.J.size(), 0.0);
  const bool pinned = cfg_.boundary == BoundaryCondition::dirichlet;
  for (std::size_t i = 0; i <= last; ++i) {
    const bool end = i == 0 || i == last;
    n[i] = (pinned && end) ? s.n[i] : s.n[i] + dt * rn[i];
  }
  if (cfg_.relaxation == RelaxationTreatment::explicit_euler) {
    for (std::size_t i = 1; i < last; ++i) J[i] = s.J[i] + dt * (rj[i] - s.J[i]);
  } else {
    // J' = -J + R integrated exactly with R frozen.
    const double decay = std::exp(-dt);
    for (std::size_t i = 1; i < last; ++i) J[i] = decay * s.J[i] + (1.0 - decay) * rj[i];
  }

  const double t_new = s.t + dt;
  const double floor = cfg_.floor();
  std::size_t clamped = 0;
  for (std::size_t i = 0; i <= last; ++i) {
    if (!std::isfinite(n[i]) || !std::isfinite(J[i])) {
      std::ostringstream os;
      os << "non-finite state at cell " << i << ", t = " << t_new;
      throw BlowupError(os.str(), i, t_new);
    }
    if (n[i] < floor) {
      n[i] = floor;
      ++clamped;
    }
  }
  if (clamps) *clamps += clamped;
  return make_state(t_new, std::move(n), std::move(J), doping_, grid_.dx());
}

Trajectory ViscousSolver::run(std::vector<double> n_init, std::vector<double> J_init,
                              const Observer& observer) const {
  Trajectory traj;
  traj.dx = grid_.dx();
  State state = initial_state(std::move(n_init), std::move(J_init));
  traj.snapshots.push_back(state);
  traj.steps.push_back({0.0, 0.0, total_mass(state.n, traj.dx), 0});
  if (observer) observer(state);

  const double T = cfg_.t_final;
  const double interval = cfg_.output_interval;
  std::size_t next_output = 1;
  std::size_t step_count = 0;
  while (state.t < T) {
    double dt = step_dt(state);
    bool hit_output = false;
    bool final_step = false;
    if (state.t + dt >= T) {
      dt = T - state.t;
      final_step = true;
    }
    if (interval > 0.0) {
      const double target = std::min(T, static_cast<double>(next_output) * interval);
      if (state.t + dt >= target) {
        dt = target - state.t;
        hit_output = true;
        final_step = target >= T;
      }
    }
    if (!(dt > 0.0)) break;

    std::size_t clamps = 0;
    try {
      state = step(state, dt, &clamps);
    } catch (const BlowupError& e) {
      throw SimulationBlowup(e, std::move(traj));
    }
    if (final_step) state.t = T;
    if (hit_output && !final_step) state.t = static_cast<double>(next_output) * interval;
    if (hit_output) ++next_output;
    ++step_count;
    traj.clamp_events += clamps;
    traj.steps.push_back({state.t, dt, total_mass(state.n, traj.dx), clamps});
    if (observer) observer(state);

    const double allowed = cfg_.clamp_fraction * static_cast<double>(cfg_.cells) *
                           static_cast<double>(step_count);
    if (static_cast<double>(traj.clamp_events) > allowed) {
      std::ostringstream os;
      os << "positivity floor hit " << traj.clamp_events << " times after " << step_count
         << " steps (limit " << allowed << ")";
      throw SimulationBlowup(BlowupError(os.str(), 0, state.t), std::move(traj));
    }

    const bool take = final_step || (interval > 0.0 ? hit_output : step_count % cfg_.output_stride == 0);
    if (take) traj.snapshots.push_back(state);
    if (final_step) break;
  }
  return traj;
}

double cfl_dt(const State& state, const SolverConfig& cfg, double dx) {
  double speed = 0.0;
  for (std::size_t i = 0; i < state.n.size(); ++i)
    speed = std::max(speed, max_wave_speed(cfg.model, {state.n[i], state.J[i]}));
  const double inf = std::numeric_limits<double>::infinity();
  const double hyperbolic = speed > 0.0 ? dx / speed : inf;
  const double parabolic = cfg.epsilon > 0.0 ? dx * dx / (2.0 * cfg.epsilon) : inf;
  return cfg.cfl_safety * std::min({hyperbolic, parabolic, 1.0});
}

double stable_dt(const State& state, const SolverConfig& cfg, double dx) {
  double speed = 0.0;
  for (std::size_t i = 0; i < state.n.size(); ++i)
    speed = std::max(speed, max_wave_speed(cfg.model, {state.n[i], state.J[i]}));
  double joint = std::numeric_limits<double>::infinity();
  if (cfg.flux == FluxScheme::central) {
    if (speed > 0.0) joint = 2.0 * cfg.epsilon / (speed * speed);
  } else {
    joint = 1.0 / (speed / dx + 2.0 * cfg.epsilon / (dx * dx));
  }
  return std::min(cfl_dt(state, cfg, dx), cfg.cfl_safety * joint);
}

State step(const State& state, const SolverConfig& cfg, const DopingProfile& doping, double dt) {
  return ViscousSolver(cfg, doping).step(state, dt);
}

Trajectory run(const SolverConfig& cfg, const DopingProfile& doping, std::span<const double> n_init,
               std::span<const double> J_init) {
  return ViscousSolver(cfg, doping)
      .run(std::vector<double>(n_init.begin(), n_init.end()), std::vector<double>(J_init.begin(), J_init.end()));
}

MmsReport mms_convergence(const SolverConfig& base, const DopingProfile& doping,
                          const ManufacturedSolution& exact, std::span<const std::size_t> resolutions) {
  if (resolutions.size() < 3) throw PreconditionError("mms_convergence: need at least three resolutions");
  for (std::size_t k = 1; k < resolutions.size(); ++k)
    if (resolutions[k] != 2 * resolutions[k - 1])
      throw PreconditionError("mms_convergence: each resolution must double the previous one");

  MmsReport report;
  for (const std::size_t cells : resolutions) {
    SolverConfig cfg = base;
    cfg.cells = cells;
    cfg.boundary = BoundaryCondition::dirichlet;
    cfg.output_interval = 0.0;
    cfg.output_stride = std::numeric_limits<std::size_t>::max();
    ViscousSolver solver(cfg, doping);
    const Grid& grid = solver.grid();
    const auto xs = grid.coordinates();
    solver.set_forcing([&exact, xs](double t, std::span<double> rn, std::span<double> rj) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        rn[i] += exact.source_n(xs[i], t);
        rj[i] += exact.source_J(xs[i], t);
      }
    });
    std::vector<double> n0(xs.size()), J0(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      n0[i] = exact.n(xs[i], 0.0);
      J0[i] = exact.J(xs[i], 0.0);
    }
    const auto traj = solver.run(std::move(n0), std::move(J0));
    const State& last = traj.snapshots.back();
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double en = last.n[i] - exact.n(xs[i], last.t);
      const double ej = last.J[i] - exact.J(xs[i], last.t);
      sq[i] = en * en + ej * ej;
    }
    report.cells.push_back(cells);
    report.errors.push_back(std::sqrt(trapezoid(sq, grid.dx())));
  }

  report.exact = std::all_of(report.errors.begin(), report.errors.end(), [](double e) { return e == 0.0; });
  if (report.exact) {
    report.message = "exact at every resolution";
    return report;
  }
  for (std::size_t k = 1; k < report.errors.size(); ++k)
    if (!(report.errors[k] < report.errors[k - 1])) report.monotone = false;

  // Least-squares slope of log(error) vs log(dx).
  const std::size_t count = report.errors.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double lx = std::log(1.0 / static_cast<double>(report.cells[k]));
    const double ly = std::log(report.errors[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double c = static_cast<double>(count);
  report.order = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  report.message = report.monotone ? "errors decrease monotonically" : "errors are not monotone under refinement";
  return report;
}

}  // namespace ephydro
