#include "ephydro/harness.hpp"

#include "ephydro/errors.hpp"
#include "ephydro/io.hpp"
#include "ephydro/manufactured.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace ephydro {

namespace {

struct Log {
  Verbosity level;
  template <typename... Args>
  void info(fmt::format_string<Args...> f, Args&&... args) const {
    if (level != Verbosity::quiet) fmt::print(stderr, "{}\n", fmt::format(f, std::forward<Args>(args)...));
  }
  template <typename... Args>
  void debug(fmt::format_string<Args...> f, Args&&... args) const {
    if (level == Verbosity::verbose) fmt::print(stderr, "{}\n", fmt::format(f, std::forward<Args>(args)...));
  }
  template <typename... Args>
  void error(fmt::format_string<Args...> f, Args&&... args) const {
    fmt::print(stderr, "error: {}\n", fmt::format(f, std::forward<Args>(args)...));
  }
};

// A diagnostic that could not run counts as a failed check.
DiagnosticRecord refusal(const std::string& name) {
  return {name, false, {{"refused", 1.0}}, std::nullopt, std::nullopt};
}

Interval range_of(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

// Maps exceptions escaping a command onto the exit-code contract.
template <typename F>
int guarded(const Log& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log.error("{}", e.what());
    return kExitConfig;
  } catch (const PreconditionError& e) {
    log.error("{}", e.what());
    return kExitConfig;
  } catch (const BracketError& e) {
    log.error("{}", e.what());
    return kExitBracket;
  } catch (const BlowupError& e) {
    log.error("{} (cell {}, t = {})", e.what(), e.cell(), e.time());
    return kExitBlowup;
  } catch (const std::exception& e) {
    log.error("{}", e.what());
    return kExitCheckFailed;
  }
}

std::filesystem::path output_dir(const ExperimentConfig& cfg, const RunOptions& opts) {
  return opts.out_dir ? *opts.out_dir : cfg.out_dir.is_relative() && !cfg.base_dir.empty()
                                            ? cfg.base_dir / cfg.out_dir
                                            : cfg.out_dir;
}

void write_run_outputs(const RunResult& r, const std::filesystem::path& dir) {
  {
    auto out = open_output(dir / "snapshots.ndjson");
    write_snapshots(out, r.trajectory);
  }
  {
    auto out = open_output(dir / "series.csv");
    const std::string cols[] = {"t", "mass", "Phi", "L", "max_wbar", "min_zbar"};
    write_csv_header(out, cols);
    for (const auto& row : r.series) {
      const double v[] = {row.t, row.mass, row.phi, row.lyapunov, row.max_wbar, row.min_zbar};
      write_csv_row(out, v);
    }
  }
  {
    auto out = open_output(dir / "reports.ndjson");
    for (const auto& rec : r.records) write_record(out, rec);
  }
}

}  // namespace

RunResult execute_run(const ExperimentConfig& cfg, Verbosity verbosity) {
  const Log log{verbosity};
  RunResult r;
  const SolverConfig& sc = cfg.solver;
  const GasModel& m = sc.model;
  const Grid grid(sc.cells);
  const double dx = grid.dx();

  const auto n0 = cfg.n0.sample(grid, cfg.doping);
  const auto J0 = cfg.J0.sample(grid, cfg.doping);
  r.initial = prepare_initial(n0, J0, cfg.doping, sc.epsilon, dx);
  if (r.initial.width_clamped)
    log.info("mollifier width eps/dx = {:.3g} cells is below 3; using 3", sc.epsilon / dx);

  try {
    r.stationary = solve_stationary(cfg.doping, m, sc.cells, {cfg.diagnostics.stationary_tol});
  } catch (const BracketError& e) {
    r.exit_code = kExitBracket;
    r.message = e.what();
    return r;
  }
  const StationaryProfile& stat = *r.stationary;

  LyapunovMonitor monitor(stat, m);
  ViscousSolver solver(sc, cfg.doping);
  try {
    r.trajectory = solver.run(r.initial.n, r.initial.J, [&monitor](const State& s) { monitor.observe(s); });
  } catch (const SimulationBlowup& e) {
    r.exit_code = kExitBlowup;
    r.message = fmt::format("{} (cell {}, t = {})", e.what(), e.cell(), e.time());
    r.trajectory = e.partial();
  }
  const Trajectory& traj = r.trajectory;
  log.debug("run finished: {} steps, {} snapshots, {} clamp events", traj.steps.size() - 1, traj.snapshots.size(),
            traj.clamp_events);

  const auto& dcfg = cfg.diagnostics;
  r.M = dcfg.region_M ? *dcfg.region_M : choose_M(r.initial.n, r.initial.J, cfg.doping, m, dx);
  r.Lambda = dcfg.lambda ? *dcfg.lambda : cfg.doping.upper() + monitor.max_density() + dcfg.lambda_margin;

  // Scalar series always accompany the run.
  const auto region = invariant_region_check(traj, m, r.M, dcfg.region_tol);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const State& s = traj.snapshots[k];
    SeriesRow row{};
    row.t = s.t;
    row.mass = trapezoid(s.n, dx);
    row.phi = decay_functional(s, stat);
    const auto split = lyapunov_split(s, stat, m);
    row.lyapunov = r.Lambda * split.weighted + split.rest;
    row.max_wbar = region.max_wbar[k];
    row.min_zbar = region.min_zbar[k];
    r.series.push_back(row);
  }

  bool all_pass = true;
  auto add = [&](DiagnosticRecord rec) {
    all_pass = all_pass && rec.pass;
    log.info("{:<28} {}", rec.name, rec.pass ? "pass" : "FAIL");
    r.records.push_back(std::move(rec));
  };

  if (dcfg.enabled(Check::mass)) {
    auto mr = mass_series(traj);
    auto rec = to_record(mr);
    const double allowance = 0.05 * sc.epsilon * sc.t_final + 1e-12 * std::abs(mr.masses.front());
    rec.scalars.emplace_back("allowance", allowance);
    rec.pass = mr.max_drift <= allowance;
    add(std::move(rec));
  }
  if (dcfg.enabled(Check::invariant_region)) {
    r.region = region;
    add(to_record(region));
  }
  if (dcfg.enabled(Check::density_bound)) {
    r.density = density_bound_check(traj, m, r.M);
    add(to_record(*r.density));
  }
  if (dcfg.enabled(Check::region_signs)) add(to_record(region_sign_check(traj, m, r.M, sc.epsilon)));
  if (dcfg.enabled(Check::entropy)) {
    std::vector<EntropyPairSource> pairs{EntropyPairSource::mechanical()};
    if (dcfg.weak_power > 0)
      pairs.push_back(EntropyPairSource::weak(monomial_generator(dcfg.weak_power),
                                              fmt::format("weak_xi{}", dcfg.weak_power)));
    for (const auto& pair : pairs) {
      try {
        auto rep = entropy_residual(traj, m, pair, dcfg.entropy_grid);
        add(to_record(rep, pair.name));
        r.entropy.emplace_back(pair.name, std::move(rep));
      } catch (const PreconditionError& e) {
        log.error("{}", e.what());
        add(refusal("entropy_residual:" + pair.name));
      }
    }
  }
  if (dcfg.enabled(Check::coercivity)) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& s : traj.snapshots) {
      const auto rg = range_of(s.n);
      lo = std::min(lo, rg.lo);
      hi = std::max(hi, rg.hi);
    }
    try {
      add(to_record(coercivity_constants({lo, hi}, range_of(stat.N_tilde), m, dcfg.coercivity_samples)));
    } catch (const DomainError& e) {
      log.error("{}", e.what());
      add(refusal("coercivity"));
    }
  }
  if (dcfg.enabled(Check::lyapunov)) {
    try {
      require_lyapunov_weight(r.Lambda, cfg.doping.upper(), monitor.max_density());
      r.lyapunov = monitor.series(r.Lambda, dcfg.lyapunov_tol);
      add(to_record(*r.lyapunov));
    } catch (const PreconditionError& e) {
      log.error("{}", e.what());
      add(refusal("lyapunov"));
    }
  }
  if (dcfg.enabled(Check::decay)) {
    std::vector<double> ts, phis;
    for (const auto& row : r.series) {
      ts.push_back(row.t);
      phis.push_back(row.phi);
    }
    const double peak = *std::max_element(phis.begin(), phis.end());
    if (peak <= 1e-24) {
      // Already at the steady state: nothing left to decay.
      add({"decay", true, {{"converged", 1.0}, {"max_Phi", peak}}, std::nullopt, std::nullopt});
    } else {
      try {
        r.decay = fit_decay_rate(ts, phis, dcfg.fit_window);
        add(to_record(*r.decay));
      } catch (const PreconditionError& e) {
        log.error("{}", e.what());
        add(refusal("decay"));
      }
    }
  }

  if (r.exit_code == kExitOk && !all_pass) {
    r.exit_code = kExitCheckFailed;
    r.message = "one or more checks failed";
  }
  return r;
}

double l1_spacetime_distance(const Trajectory& a, const Trajectory& b) {
  if (a.snapshots.size() != b.snapshots.size())
    throw ShapeError("l1_spacetime_distance: trajectories have different snapshot counts");
  const std::size_t count = a.snapshots.size();
  std::vector<double> per_time(count);
  for (std::size_t k = 0; k < count; ++k) {
    const State& sa = a.snapshots[k];
    const State& sb = b.snapshots[k];
    if (std::abs(sa.t - sb.t) > 1e-9 * std::max(1.0, std::abs(sa.t)))
      throw ShapeError("l1_spacetime_distance: snapshot times differ");
    require_conforming(sa.n, sb.n, "l1_spacetime_distance");
    std::vector<double> f(sa.n.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::abs(sa.n[i] - sb.n[i]) + std::abs(sa.J[i] - sb.J[i]);
    per_time[k] = trapezoid(f, a.dx);
  }
  double total = 0.0;
  for (std::size_t k = 1; k < count; ++k)
    total += 0.5 * (a.snapshots[k].t - a.snapshots[k - 1].t) * (per_time[k] + per_time[k - 1]);
  return total;
}

SweepResult execute_sweep(const ExperimentConfig& cfg, const std::vector<double>& epsilons,
                          std::vector<Trajectory>* trajectories) {
  if (epsilons.size() < 3) throw PreconditionError("sweep-eps needs at least three epsilon values");
  for (std::size_t k = 1; k < epsilons.size(); ++k)
    if (!(epsilons[k] < epsilons[k - 1])) throw PreconditionError("sweep-eps values must be strictly decreasing");

  SolverConfig base = cfg.solver;
  if (!(base.output_interval > 0.0)) base.output_interval = base.t_final / 200.0;
  const Grid grid(base.cells);
  const auto n0 = cfg.n0.sample(grid, cfg.doping);
  const auto J0 = cfg.J0.sample(grid, cfg.doping);

  std::vector<std::future<Trajectory>> jobs;
  for (double eps : epsilons) {
    jobs.push_back(std::async(std::launch::async, [&, eps] {
      SolverConfig sc = base;
      sc.epsilon = eps;
      const auto init = prepare_initial(n0, J0, cfg.doping, eps, grid.dx());
      return ViscousSolver(sc, cfg.doping).run(init.n, init.J);
    }));
  }
  std::vector<Trajectory> runs;
  std::optional<SimulationBlowup> failure;
  for (auto& job : jobs) {
    try {
      runs.push_back(job.get());
    } catch (const SimulationBlowup& e) {
      if (!failure) failure.emplace(e);
    }
  }
  if (failure) throw *failure;

  SweepResult out;
  out.epsilons = epsilons;
  for (std::size_t k = 1; k < runs.size(); ++k) out.distances.push_back(l1_spacetime_distance(runs[k - 1], runs[k]));
  out.decreasing = true;
  for (std::size_t k = 1; k < out.distances.size(); ++k)
    out.decreasing = out.decreasing && out.distances[k] < out.distances[k - 1];
  out.exit_code = out.decreasing ? kExitOk : kExitCheckFailed;
  out.message = out.decreasing ? "distances decrease" : "distances do not decrease";
  if (trajectories) *trajectories = std::move(runs);
  return out;
}

MmsReport execute_mms(const ExperimentConfig& cfg, const std::vector<std::size_t>& resolutions) {
  if (cfg.mms.solution == "constant") {
    const double c = cfg.doping.upper();
    if (cfg.doping.lower() != c) throw PreconditionError("constant manufactured solution needs constant doping");
    return mms_convergence(cfg.solver, cfg.doping, ConstantManufactured(c), resolutions);
  }
  return mms_convergence(cfg.solver, cfg.doping, TrigManufactured(cfg.solver.model, cfg.solver.epsilon, cfg.doping),
                         resolutions);
}

double mms_required_order(FluxScheme flux) { return flux == FluxScheme::central ? 1.8 : 0.9; }

int cmd_run(const std::filesystem::path& config_path, const RunOptions& opts) {
  const Log log{opts.verbosity};
  return guarded(log, [&] {
    const auto cfg = load_config(config_path);
    const auto dir = output_dir(cfg, opts);
    auto r = execute_run(cfg, opts.verbosity);
    write_run_outputs(r, dir);
    if (!r.message.empty() && r.exit_code != kExitOk) log.error("{}", r.message);
    log.info("outputs written to {}", dir.string());
    return r.exit_code;
  });
}

int cmd_stationary(const std::filesystem::path& config_path, const RunOptions& opts) {
  const Log log{opts.verbosity};
  return guarded(log, [&] {
    const auto cfg = load_config(config_path);
    const auto dir = output_dir(cfg, opts);
    const auto prof =
        solve_stationary(cfg.doping, cfg.solver.model, cfg.stationary_cells(), {cfg.diagnostics.stationary_tol});
    auto out = open_output(dir / "stationary.csv");
    write_stationary_csv(out, prof);
    log.info("N~(0) = {:.12g}, |E~(1)| = {:.3g}, {} iterations", prof.N_tilde.front(), prof.shoot_residual,
             prof.iterations);
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep_eps(const std::filesystem::path& config_path, const std::vector<double>& epsilons,
                  const RunOptions& opts) {
  const Log log{opts.verbosity};
  return guarded(log, [&] {
    const auto cfg = load_config(config_path);
    const auto dir = output_dir(cfg, opts);
    std::vector<Trajectory> runs;
    const auto res = execute_sweep(cfg, epsilons, &runs);
    auto out = open_output(dir / "sweep.csv");
    const std::string cols[] = {"eps_a", "eps_b", "L1_distance"};
    write_csv_header(out, cols);
    for (std::size_t k = 0; k < res.distances.size(); ++k) {
      const double row[] = {res.epsilons[k], res.epsilons[k + 1], res.distances[k]};
      write_csv_row(out, row);
      log.info("d({:g}, {:g}) = {:.6g}", res.epsilons[k], res.epsilons[k + 1], res.distances[k]);
    }
    log.info("{}", res.message);
    return res.exit_code;
  });
}

int cmd_mms(const std::filesystem::path& config_path, const std::vector<std::size_t>& resolutions,
            const RunOptions& opts) {
  const Log log{opts.verbosity};
  return guarded(log, [&] {
    const auto cfg = load_config(config_path);
    const auto dir = output_dir(cfg, opts);
    const auto& res = resolutions.empty() ? cfg.mms.resolutions : resolutions;
    const auto rep = execute_mms(cfg, res);
    auto out = open_output(dir / "mms.csv");
    out << "N,L2_error,observed_order\n";
    for (std::size_t k = 0; k < rep.cells.size(); ++k) {
      std::string order;
      if (rep.exact)
        order = "exact";
      else if (k > 0)
        order = format_double(std::log(rep.errors[k - 1] / rep.errors[k]) /
                              std::log(static_cast<double>(rep.cells[k]) / static_cast<double>(rep.cells[k - 1])));
      out << rep.cells[k] << ',' << format_double(rep.errors[k]) << ',' << order << '\n';
    }
    const double need = mms_required_order(cfg.solver.flux);
    const bool pass = rep.exact || (rep.monotone && rep.order >= need);
    log.info("observed order {:.4f} (need {}), {}", rep.order, need, rep.message);
    return pass ? static_cast<int>(kExitOk) : static_cast<int>(kExitCheckFailed);
  });
}

}  // namespace ephydro
