// Acceptance suite: one PASS/FAIL line per criterion, plus INFO lines with
// supporting measurements. Exits 0 once every criterion has been evaluated;
// --strict makes any failure fatal.
#include "ephydro/config.hpp"
#include "ephydro/diagnostics.hpp"
#include "ephydro/gas_model.hpp"
#include "ephydro/harness.hpp"
#include "ephydro/manufactured.hpp"
#include "ephydro/stationary.hpp"

#include "oracle_values.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace ephydro;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Report {
 public:
  void criterion(int id, bool pass, const std::string& detail) {
    emit(fmt::format("[{}] criterion {:>2}: {}", pass ? "PASS" : "FAIL", id, detail));
    if (!pass) failed_.push_back(id);
    ++evaluated_;
  }
  void info(int id, const std::string& detail) { emit(fmt::format("[INFO] criterion {:>2}: {}", id, detail)); }
  void emit(const std::string& line) {
    std::cout << line << std::endl;
    lines_.push_back(line);
  }
  const std::vector<int>& failed() const { return failed_; }
  int evaluated() const { return evaluated_; }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
  std::vector<int> failed_;
  int evaluated_ = 0;
};

const char* kSineScenario = R"(
[model]
gamma = {gamma}
doping = sine:1:0.5:1
[initial]
n0 = doping-match
J0 = constant:0
[solver]
epsilon = {eps}
N = {N}
T_final = 20
scheme = central
output_interval = 0.02
[diagnostics]
checks = {checks}
fit_window = 2,18
entropy_tests = 5x5
c_trunc = 10
lambda_margin = 1.5
lyapunov_tol = 1e-8
)";

ExperimentConfig sine_scenario(double gamma, double eps, std::size_t cells, const std::string& checks) {
  return parse_config(fmt::format(fmt::runtime(kSineScenario), fmt::arg("gamma", gamma), fmt::arg("eps", eps),
                                  fmt::arg("N", cells), fmt::arg("checks", checks)));
}

double max_of(const std::vector<SeriesRow>& rows, double SeriesRow::*field) {
  double v = -INFINITY;
  for (const auto& r : rows) v = std::max(v, r.*field);
  return v;
}

double min_of(const std::vector<SeriesRow>& rows, double SeriesRow::*field) {
  double v = INFINITY;
  for (const auto& r : rows) v = std::min(v, r.*field);
  return v;
}

double value_at(const std::vector<SeriesRow>& rows, double t) {
  const auto it = std::min_element(rows.begin(), rows.end(),
                                   [t](const SeriesRow& a, const SeriesRow& b) { return std::abs(a.t - t) < std::abs(b.t - t); });
  return it->phi;
}

double median_phi(const Trajectory& traj, const StationaryProfile& stat, double t0, double t1) {
  std::vector<double> v;
  for (const auto& s : traj.snapshots)
    if (s.t >= t0 && s.t <= t1) v.push_back(decay_functional(s, stat));
  if (v.empty()) return NAN;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

const EntropyResidualReport* entropy_of(const RunResult& r, const std::string& name) {
  for (const auto& [n, rep] : r.entropy)
    if (n == name) return &rep;
  return nullptr;
}

// ---------------------------------------------------------------------------

void criterion_1(Report& rep) {
  const auto t0 = Clock::now();
  const auto cfg = parse_config(
      "gamma = 2\ndoping = constant:1\nn0 = doping-match\nJ0 = constant:0\n"
      "epsilon = 1e-3\nN = 200\nT_final = 5\noutput_interval = 0.05\nchecks = mass\n");
  const auto res = execute_run(cfg);
  const double secs = seconds_since(t0);
  const double phi = max_of(res.series, &SeriesRow::phi);
  double drift = 0.0;
  for (const auto& row : res.series) drift = std::max(drift, std::abs(row.mass - res.series.front().mass));
  const bool pass = res.exit_code == kExitOk && phi <= 1e-12 && drift <= 1e-12 && secs < 10.0;
  rep.criterion(1, pass,
                fmt::format("equilibrium: max Phi = {:.3e} (<= 1e-12), mass drift = {:.3e} (<= 1e-12), {:.2f} s (< 10 s)",
                            phi, drift, secs));
}

struct ScenarioRuns {
  RunResult gamma2;
  double gamma2_seconds = 0.0;
};

ScenarioRuns criterion_2(Report& rep) {
  ScenarioRuns out;
  bool all = true;
  std::vector<std::string> parts;
  for (double gamma : {1.5, 2.0, 3.0}) {
    const bool full = gamma == 2.0;
    const auto t0 = Clock::now();
    auto res = execute_run(sine_scenario(gamma, 1e-3, 400, full ? "all" : "invariant_region, density_bound"));
    const double secs = seconds_since(t0);
    const double tol = 1e-6 + 10.0 * 1.0 / (400.0 * 400.0);
    const double wbar = max_of(res.series, &SeriesRow::max_wbar);
    const double zbar = min_of(res.series, &SeriesRow::min_zbar);
    const auto& dens = *res.density;
    const bool ok = res.exit_code != kExitBlowup && res.exit_code != kExitBracket && wbar <= tol && zbar >= -tol &&
                    dens.max_n <= dens.bound && dens.max_velocity <= dens.invariant_bound && secs < 120.0;
    all = all && ok;
    parts.push_back(fmt::format("gamma={} M={:.4g} max wbar={:.3e} min zbar={:.3e} max n={:.4f}<={:.4g} "
                                "max|u|={:.4f}<={:.4f} {:.1f}s",
                                gamma, res.M, wbar, zbar, dens.max_n, dens.bound, dens.max_velocity,
                                dens.invariant_bound, secs));
    if (full) {
      out.gamma2 = std::move(res);
      out.gamma2_seconds = secs;
    }
  }
  rep.criterion(2, all, fmt::format("invariant region, tol = 1e-6 + 10 dx^2 = {:.4e}", 1e-6 + 10.0 / 160000.0));
  for (const auto& p : parts) rep.info(2, p);
  return out;
}

void criterion_3(Report& rep, const RunResult& res, const std::vector<Trajectory>& sweep,
                 const std::vector<double>& sweep_eps) {
  if (!res.decay) {
    rep.criterion(3, false, "decay fit refused (see reports)");
    return;
  }
  const auto& d = *res.decay;
  const double phi2 = value_at(res.series, 2.0), phi18 = value_at(res.series, 18.0);
  const double envelope = phi2 * std::exp(-d.rate * 16.0) * 1.1;
  const bool pass = d.rate > 0.0 && d.r2 >= 0.98 && phi18 <= envelope;
  rep.criterion(3, pass,
                fmt::format("fit on [2,18]: c = {:.4f} (> 0), R^2 = {:.4f} (>= 0.98), Phi(18) = {:.3e} vs "
                            "Phi(2) e^(-16c) 1.1 = {:.3e}",
                            d.rate, d.r2, phi18, envelope));

  // Where log-linearity breaks: the viscous steady state differs from the inviscid one by O(eps).
  const auto& stat = *res.stationary;
  std::vector<double> ts, phis;
  for (const auto& row : res.series) {
    ts.push_back(row.t);
    phis.push_back(row.phi);
  }
  try {
    const auto early = fit_decay_rate(ts, phis, {2.0, 6.0});
    rep.info(3, fmt::format("fit on [2,6] before the floor: c = {:.4f}, R^2 = {:.4f}", early.rate, early.r2));
  } catch (const std::exception& e) {
    rep.info(3, fmt::format("fit on [2,6] refused: {}", e.what()));
  }
  for (std::size_t k = 0; k < sweep.size(); ++k)
    rep.info(3, fmt::format("eps = {:.1e}: median Phi on [14,20] = {:.3e}, Phi / eps^2 = {:.3f}", sweep_eps[k],
                            median_phi(sweep[k], stat, 14.0, 20.0),
                            median_phi(sweep[k], stat, 14.0, 20.0) / (sweep_eps[k] * sweep_eps[k])));
}

void criterion_4(Report& rep, const RunResult& res) {
  if (!res.lyapunov) {
    rep.criterion(4, false, "Lyapunov series refused (see reports)");
    return;
  }
  const auto& ly = *res.lyapunov;
  rep.criterion(4, ly.increases == 0,
                fmt::format("Lambda = {:.4f}, {} per-step values, increases beyond 1e-8 L(0) = {} (must be 0), "
                            "largest relative rise = {:.3e}",
                            ly.Lambda, ly.values.size(), ly.increases, ly.max_increase));
  const double L0 = ly.values.front();
  for (std::size_t k = 1; k < ly.values.size(); ++k)
    if (ly.values[k] - ly.values[k - 1] > ly.tol_rel * L0) {
      rep.info(4, fmt::format("first increase at t = {:.4f}, where L = {:.3e} (L(0) = {:.3e})", ly.times[k],
                              ly.values[k], L0));
      break;
    }
}

void criterion_5(Report& rep, const RunResult& coarse) {
  const auto* mech = entropy_of(coarse, "mechanical");
  if (!mech) {
    rep.criterion(5, false, "entropy residual refused at N=400");
    return;
  }
  const auto fine_run = execute_run(sine_scenario(2.0, 1e-3, 800, "entropy"));
  const auto* fine = entropy_of(fine_run, "mechanical");
  if (!fine) {
    rep.criterion(5, false, "entropy residual refused at N=800");
    return;
  }
  const double v400 = std::min(0.0, mech->worst), v800 = std::min(0.0, fine->worst);
  const bool within = mech->worst >= -mech->tol;
  const bool shrinks = v400 == 0.0 || (v800 == 0.0 || std::abs(v400) / std::abs(v800) >= 1.5);
  const double ratio = v800 != 0.0 ? std::abs(v400) / std::abs(v800) : INFINITY;
  rep.criterion(5, within && shrinks,
                fmt::format("mechanical pair: worst = {:.3e} >= -tol_w = {:.3e}: {}; N 400 -> 800 worst = {:.3e}, "
                            "shrink factor {:.3f} (>= 1.5): {}",
                            mech->worst, -mech->tol, within ? "yes" : "no", fine->worst, ratio,
                            shrinks ? "yes" : "no"));
  if (const auto* weak = entropy_of(coarse, "weak_xi4"))
    rep.info(5, fmt::format("weak pair g = xi^4 at N=400: worst = {:.3e}, tol_w = {:.3e}", weak->worst, weak->tol));

  // Refining the grid at fixed eps leaves the O(eps) viscous contribution in place; refine both.
  const auto joint = execute_run(sine_scenario(2.0, 5e-4, 800, "entropy"));
  if (const auto* j = entropy_of(joint, "mechanical"))
    rep.info(5, fmt::format("joint refinement (N=800, eps=5e-4): worst = {:.3e}, shrink factor vs N=400, "
                            "eps=1e-3 = {:.3f}",
                            j->worst, j->worst < 0.0 ? std::abs(v400) / std::abs(j->worst) : INFINITY));
}

void criterion_6(Report& rep) {
  bool pass = true;
  double const_err = 0.0;
  for (double gamma : {1.5, 2.0, 3.0})
    for (double c : {0.5, 1.0, 1.5}) {
      const auto p = solve_stationary(DopingProfile::constant(c), GasModel::from_gamma(gamma), 400);
      for (std::size_t i = 0; i < p.N_tilde.size(); ++i)
        const_err = std::max({const_err, std::abs(p.N_tilde[i] - c), std::abs(p.E_tilde[i])});
    }
  pass = pass && const_err <= 1e-12;

  const auto d = DopingProfile::sine(1.0, 0.5, 1.0);
  double oracle_err = 0.0, lo = INFINITY, hi = -INFINITY;
  for (const auto& ref : oracle::kSineSteady) {
    const auto p = solve_stationary(d, GasModel::from_gamma(ref.gamma), 400);
    const std::size_t mid = p.N_tilde.size() / 2;
    oracle_err = std::max({oracle_err, std::abs(p.N_tilde.front() - ref.N_at_0),
                           std::abs(p.N_tilde[mid] - ref.N_at_half), std::abs(p.N_tilde.back() - ref.N_at_1)});
    lo = std::min(lo, *std::min_element(p.N_tilde.begin(), p.N_tilde.end()));
    hi = std::max(hi, *std::max_element(p.N_tilde.begin(), p.N_tilde.end()));
  }
  pass = pass && oracle_err <= 1e-6 && lo >= 0.5 - 1e-6 && hi <= 1.5 + 1e-6;
  rep.criterion(6, pass,
                fmt::format("constant D max error = {:.2e} (<= 1e-12); sine D vs oracle at x in {{0, 0.5, 1}} "
                            "max error = {:.2e} (<= 1e-6); N_tilde in [{:.6f}, {:.6f}] within [0.5, 1.5]",
                            const_err, oracle_err, lo, hi));
}

void criterion_7(Report& rep, const SweepResult& sweep, double secs) {
  std::string dist;
  for (std::size_t k = 0; k < sweep.distances.size(); ++k)
    dist += fmt::format("{}d({:.0e},{:.0e}) = {:.4e}", k ? ", " : "", sweep.epsilons[k], sweep.epsilons[k + 1],
                        sweep.distances[k]);
  rep.criterion(7, sweep.exit_code == kExitOk && sweep.decreasing,
                fmt::format("eps sweep on N=400: {}; strictly decreasing: {} ({:.1f} s)", dist,
                            sweep.decreasing ? "yes" : "no", secs));
}

void criterion_8(Report& rep) {
  const auto t0 = Clock::now();
  auto cfg = parse_config("gamma = 2\ndoping = constant:1\nepsilon = 0.05\nN = 100\nT_final = 0.5\n"
                          "scheme = central\n[mms]\nsolution = trig\n");
  const std::vector<std::size_t> res{100, 200, 400};
  const auto central = execute_mms(cfg, res);
  cfg.mms.solution = "constant";
  const auto constant = execute_mms(cfg, res);
  const double secs = seconds_since(t0);
  const bool pass = central.order >= 1.8 && central.monotone && constant.exact && secs < 60.0;
  rep.criterion(8, pass,
                fmt::format("central order = {:.4f} (>= 1.8), errors {:.3e} {:.3e} {:.3e}; constant solution "
                            "exact: {}; {:.1f} s (< 60 s)",
                            central.order, central.errors[0], central.errors[1], central.errors[2],
                            constant.exact ? "yes" : "no", secs));
  cfg.mms.solution = "trig";
  cfg.solver.flux = FluxScheme::rusanov;
  const auto rusanov = execute_mms(cfg, res);
  rep.info(8, fmt::format("rusanov order = {:.4f} (expected >= 0.9)", rusanov.order));
}

void criterion_9(Report& rep) {
  bool pass = true;
  std::string parts;
  for (double gamma : {1.5, 2.0, 3.0}) {
    const auto c = coercivity_constants({0.5, 1.5}, {0.5, 1.5}, GasModel::from_gamma(gamma), 100);
    pass = pass && c.violations == 0 && c.samples == 10000;
    parts += fmt::format(" gamma={}: C1={:.4f} C2={:.4f} violations={}/{};", gamma, c.C1, c.C2, c.violations,
                         c.samples);
  }
  rep.criterion(9, pass, "coercivity sandwich on [0.5,1.5]^2, 100x100 samples:" + parts);
}

void criterion_10(Report& rep) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); };
  const double tol = 1e-6;
  const int samples = 1000;
  std::size_t fails[4] = {0, 0, 0, 0};

  for (int k = 0; k < samples; ++k) {
    const auto m = GasModel::from_gamma(uniform(1.05, 3.0));
    const double n = std::exp(uniform(std::log(1e-3), std::log(1e2)));
    const double J = n * uniform(-5.0, 5.0);
    const auto back = from_invariants(m, to_invariants(m, {n, J}));
    if (rel(back.n, n) > tol || std::abs(back.J - J) > tol * (std::abs(J) + n)) ++fails[0];
  }

  for (int k = 0; k < samples; ++k) {
    const auto m = GasModel::from_gamma(uniform(1.05, 3.0));
    const double n = uniform(0.1, 4.0), J = uniform(-3.0, 3.0);
    const double hn = 1e-5 * n, hJ = 1e-5 * std::max(1.0, std::abs(J));
    auto eta = [&](double a, double b) { return mechanical_energy(m, {a, b}).eta; };
    auto q = [&](double a, double b) { return mechanical_energy(m, {a, b}).q; };
    const double eta_n = (eta(n + hn, J) - eta(n - hn, J)) / (2 * hn);
    const double eta_J = (eta(n, J + hJ) - eta(n, J - hJ)) / (2 * hJ);
    const double q_n = (q(n + hn, J) - q(n - hn, J)) / (2 * hn);
    const double q_J = (q(n, J + hJ) - q(n, J - hJ)) / (2 * hJ);
    const double u = J / n;
    // grad q = grad eta . dF with dF = [[0, 1], [p' - u^2, 2u]]
    const double rhs_n = eta_J * (pressure_derivative(m, n) - u * u);
    const double rhs_J = eta_n + 2.0 * u * eta_J;
    const double scale_n = std::abs(eta_J) * (pressure_derivative(m, n) + u * u) + 1e-12;
    const double scale_J = std::abs(eta_n) + std::abs(2.0 * u * eta_J) + 1e-12;
    if (std::abs(q_n - rhs_n) > tol * scale_n || std::abs(q_J - rhs_J) > tol * scale_J) ++fails[1];
  }

  for (int k = 0; k < samples; ++k) {
    const auto m = GasModel::from_gamma(uniform(1.05, 3.0));
    const double n = uniform(0.05, 5.0), J = uniform(-3.0, 3.0);
    // exact Hessian [[J^2/n^3 + p'(n)/n, -J/n^2], [-J/n^2, 1/n]]
    const double a = J * J / (n * n * n) + pressure_derivative(m, n) / n, b = -J / (n * n), c = 1.0 / n;
    const double tr = a + c, det = a * c - b * b;
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double lmin = 0.5 * tr - disc;
    if (lmin < -tol * tr) ++fails[2];
  }

  const auto one = monomial_generator(0), lin = monomial_generator(1);
  for (int k = 0; k < samples; ++k) {
    const auto m = GasModel::from_gamma(uniform(1.05, 3.0));
    const double n = uniform(0.05, 5.0), J = uniform(-3.0, 3.0);
    const double c = kernel_mass(m);
    const auto v1 = weak_entropy_pair(m, one, {n, J});
    const auto v2 = weak_entropy_pair(m, lin, {n, J});
    if (rel(v1.eta, c * n) > tol || std::abs(v1.q - c * J) > tol * c * (std::abs(J) + n) ||
        std::abs(v2.eta - c * J) > tol * c * (std::abs(J) + n))
      ++fails[3];
  }
  const double secs = seconds_since(t0);
  const bool pass = fails[0] + fails[1] + fails[2] + fails[3] == 0 && secs < 5.0;
  rep.criterion(10, pass,
                fmt::format("{} samples each at rel tol 1e-6: invariant round trip {} fails, flux compatibility {} "
                            "fails, Hessian {} fails, g=1/g=xi identities {} fails; {:.2f} s (< 5 s)",
                            samples, fails[0], fails[1], fails[2], fails[3], secs));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the viscous Euler-Poisson simulator"};
  std::string report_path;
  bool strict = false;
  app.add_option("--report", report_path, "Also write the result lines to this file");
  app.add_flag("--strict", strict, "Exit nonzero if any criterion fails");
  CLI11_PARSE(app, argc, argv);

  Report rep;
  const auto t0 = Clock::now();
  try {
    criterion_1(rep);
    auto runs = criterion_2(rep);

    const auto sweep_t0 = Clock::now();
    const std::vector<double> eps{4e-3, 2e-3, 1e-3, 5e-4};
    std::vector<Trajectory> sweep_trajs;
    const auto sweep = execute_sweep(sine_scenario(2.0, 1e-3, 400, "mass"), eps, &sweep_trajs);
    const double sweep_secs = seconds_since(sweep_t0);

    criterion_3(rep, runs.gamma2, sweep_trajs, eps);
    criterion_4(rep, runs.gamma2);
    criterion_5(rep, runs.gamma2);
    criterion_6(rep);
    criterion_7(rep, sweep, sweep_secs);
    criterion_8(rep);
    criterion_9(rep);
    criterion_10(rep);
  } catch (const std::exception& e) {
    rep.emit(fmt::format("[ERROR] acceptance aborted: {}", e.what()));
    if (!report_path.empty()) std::ofstream(report_path) << rep.lines().back() << '\n';
    return 2;
  }

  std::string failed;
  for (int id : rep.failed()) failed += fmt::format("{}{}", failed.empty() ? "" : ", ", id);
  rep.emit(fmt::format("summary: {}/{} criteria pass{}; {:.1f} s total", rep.evaluated() - rep.failed().size(),
                       rep.evaluated(), failed.empty() ? "" : "; failing: " + failed, seconds_since(t0)));

  if (!report_path.empty()) {
    std::ofstream out(report_path);
    for (const auto& line : rep.lines()) out << line << '\n';
  }
  return strict && !rep.failed().empty() ? 1 : 0;
}
