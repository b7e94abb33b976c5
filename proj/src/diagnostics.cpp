#include "ephydro/diagnostics.hpp"

#include "ephydro/errors.hpp"
#include "ephydro/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ephydro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> time_weights(std::span<const double> t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double h = t[k + 1] - t[k];
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
  }
  return w;
}

std::vector<double> snapshot_times(const Trajectory& traj) {
  std::vector<double> t;
  t.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) t.push_back(s.t);
  return t;
}

}  // namespace

double field_bound_surrogate(std::span<const double> n0, const DopingProfile& doping, double dx) {
  const auto d = doping.sample(Grid::from_nodes(n0.size()));
  return trapezoid(n0, dx) + trapezoid(d, dx) + 1.0;
}

double choose_M(std::span<const double> n0, std::span<const double> J0, const DopingProfile& doping,
                const GasModel& m, double dx) {
  require_conforming(n0, J0, "choose_M");
  const Grid grid = Grid::from_nodes(n0.size());
  double sup_w = -kInf, sup_z = -kInf;
  for (std::size_t i = 0; i < n0.size(); ++i) {
    const auto rp = to_invariants(m, {n0[i], J0[i]});
    sup_w = std::max(sup_w, rp.w - grid.x(i));
    sup_z = std::max(sup_z, grid.x(i) - rp.z);
  }
  const double M0 = field_bound_surrogate(n0, doping, dx);
  return std::max({sup_w, sup_z, (M0 + 2.0) / m.theta}) + 1.0;
}

InvariantRegionReport invariant_region_check(const Trajectory& traj, const GasModel& m, double M,
                                             std::optional<double> tol) {
  InvariantRegionReport rep;
  rep.M = M;
  rep.tol = tol.value_or(1e-6 + 10.0 * traj.dx * traj.dx);
  double worst = -kInf;
  for (const auto& s : traj.snapshots) {
    double mw = -kInf, mz = kInf;
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      if (!(s.n[i] > 0.0)) {
        ++rep.indeterminate;
        continue;
      }
      const double x = static_cast<double>(i) * traj.dx;
      const auto rp = to_invariants(m, {s.n[i], s.J[i]});
      const double wbar = rp.w - (M + x);
      const double zbar = rp.z + (M - x);
      mw = std::max(mw, wbar);
      mz = std::min(mz, zbar);
      const double excess = std::max(wbar, -zbar);
      if (excess > worst) {
        worst = excess;
        rep.worst_x = x;
        rep.worst_t = s.t;
      }
    }
    rep.times.push_back(s.t);
    rep.max_wbar.push_back(mw);
    rep.min_zbar.push_back(mz);
    if (!rep.first_violation && (mw > rep.tol || mz < -rep.tol)) rep.first_violation = s.t;
  }
  rep.pass = !rep.first_violation.has_value();
  return rep;
}

DensityBoundReport density_bound_check(const Trajectory& traj, const GasModel& m, double M) {
  DensityBoundReport rep;
  rep.bound = std::pow(1.5 * M, 1.0 / m.theta);
  for (const auto& s : traj.snapshots) {
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      rep.max_n = std::max(rep.max_n, s.n[i]);
      if (!(s.n[i] > 0.0)) continue;
      const auto rp = to_invariants(m, {s.n[i], s.J[i]});
      rep.invariant_bound = std::max({rep.invariant_bound, std::abs(rp.w), std::abs(rp.z)});
      rep.max_velocity = std::max(rep.max_velocity, std::abs(s.J[i]) / s.n[i]);
    }
  }
  const double slack = 1e-12 * rep.bound;
  rep.pass = rep.max_n <= rep.bound + slack && rep.max_velocity <= rep.invariant_bound * (1.0 + 1e-12);
  return rep;
}

RegionSignReport region_sign_check(const Trajectory& traj, const GasModel& m, double M, double epsilon) {
  RegionSignReport rep;
  const double th = m.theta;
  rep.a12 = -1.0 + 0.5 * th;
  rep.a21 = rep.a12;
  rep.max_R1 = -kInf;
  rep.min_R2 = kInf;
  const double dx = traj.dx;
  for (const auto& s : traj.snapshots) {
    const std::size_t last = s.n.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
      const double x = static_cast<double>(i) * dx;
      double n_x;
      if (i == 0)
        n_x = (s.n[1] - s.n[0]) / dx;
      else if (i == last)
        n_x = (s.n[last] - s.n[last - 1]) / dx;
      else
        n_x = (s.n[i + 1] - s.n[i - 1]) / (2.0 * dx);
      const double grad = epsilon * th * (th + 1.0) * std::pow(s.n[i], th - 2.0) * n_x * n_x;
      const double phi = M + x;
      const double psi = M - x;
      const double E = s.E.values[i];
      const double R1 = -grad + E - (1.0 + 0.5 * th) * phi + (1.0 - 0.5 * th) * psi;
      const double R2 = grad + E - (1.0 - 0.5 * th) * phi + (1.0 + 0.5 * th) * psi;
      rep.max_R1 = std::max(rep.max_R1, R1);
      rep.min_R2 = std::min(rep.min_R2, R2);
    }
  }
  rep.pass = rep.a12 <= 0.0 && rep.a21 <= 0.0 && rep.max_R1 <= 0.0 && rep.min_R2 >= 0.0;
  return rep;
}

EntropyPairSource EntropyPairSource::mechanical() { return {}; }

EntropyPairSource EntropyPairSource::weak(EntropyGenerator gen, std::string name) {
  EntropyPairSource p;
  p.kind = Kind::weak;
  p.generator = std::move(gen);
  p.name = std::move(name);
  return p;
}

EntropyPairValue EntropyPairSource::evaluate(const GasModel& m, FluidPoint pt) const {
  if (kind == Kind::mechanical) return mechanical_energy(m, pt);
  return weak_entropy_pair(m, generator, pt, kWeakEntropyNodes, false);
}

double bump(double r) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double a = 1.0 - r * r;
  return a * a * a * a;
}

double bump_derivative(double r) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double a = 1.0 - r * r;
  return -8.0 * r * a * a * a;
}

EntropyResidualReport entropy_residual(const Trajectory& traj, const GasModel& m, const EntropyPairSource& pair,
                                       const TestGridSpec& spec) {
  if (traj.snapshots.size() < 2) throw PreconditionError("entropy_residual: need at least two snapshots");
  if (spec.space == 0 || spec.time == 0) throw PreconditionError("entropy_residual: empty test grid");

  const auto times = snapshot_times(traj);
  const double t_begin = times.front();
  const double T = times.back() - t_begin;
  const double hx = 1.0 / static_cast<double>(spec.space + 1);
  const double ht = T / static_cast<double>(spec.time + 1);

  double max_gap = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) max_gap = std::max(max_gap, times[k] - times[k - 1]);
  const double needed = ht / static_cast<double>(spec.min_samples);
  if (max_gap > needed) {
    std::ostringstream os;
    os << "entropy_residual: snapshot spacing " << max_gap << " exceeds " << needed
       << "; record snapshots at least every " << needed << " time units";
    throw PreconditionError(os.str());
  }

  // A few full-accuracy evaluations exercise the quadrature self-check once.
  if (pair.kind == EntropyPairSource::Kind::weak) {
    const auto& s0 = traj.snapshots.front();
    for (std::size_t i = 0; i < s0.n.size(); i += std::max<std::size_t>(1, s0.n.size() / 8))
      weak_entropy_pair(m, pair.generator, {s0.n[i], s0.J[i]});
  }

  EntropyResidualReport rep;
  for (std::size_t i = 0; i < spec.space; ++i) rep.x_centers.push_back(static_cast<double>(i + 1) * hx);
  for (std::size_t j = 0; j < spec.time; ++j) rep.t_centers.push_back(t_begin + static_cast<double>(j + 1) * ht);
  rep.residuals.assign(spec.space * spec.time, 0.0);

  const auto wt = time_weights(times);
  const double dx = traj.dx;
  const std::size_t nodes = traj.snapshots.front().n.size();

  // Space weights and bump samples are snapshot independent.
  std::vector<double> wx(nodes, dx);
  wx.front() = wx.back() = 0.5 * dx;
  std::vector<std::vector<double>> bx(spec.space, std::vector<double>(nodes)), dbx = bx;
  for (std::size_t i = 0; i < spec.space; ++i)
    for (std::size_t l = 0; l < nodes; ++l) {
      const double r = (static_cast<double>(l) * dx - rep.x_centers[i]) / hx;
      bx[i][l] = bump(r);
      dbx[i][l] = bump_derivative(r) / hx;
    }

  std::vector<double> eta(nodes), q(nodes), src(nodes);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& s = traj.snapshots[k];
    bool active = false;
    for (std::size_t j = 0; j < spec.time; ++j)
      active = active || std::abs(times[k] - rep.t_centers[j]) < ht;
    if (!active || wt[k] == 0.0) continue;

    for (std::size_t l = 0; l < nodes; ++l) {
      const auto v = pair.evaluate(m, {s.n[l], s.J[l]});
      eta[l] = v.eta;
      q[l] = v.q;
      src[l] = v.eta_J * (s.n[l] * s.E.values[l] - s.J[l]);
    }
    for (std::size_t i = 0; i < spec.space; ++i) {
      double A = 0.0, B = 0.0;
      for (std::size_t l = 0; l < nodes; ++l) {
        A += wx[l] * eta[l] * bx[i][l];
        B += wx[l] * (q[l] * dbx[i][l] + src[l] * bx[i][l]);
      }
      for (std::size_t j = 0; j < spec.time; ++j) {
        const double r = (times[k] - rep.t_centers[j]) / ht;
        const double bt = bump(r);
        const double dbt = bump_derivative(r) / ht;
        rep.residuals[j * spec.space + i] += wt[k] * (dbt * A + bt * B);
      }
    }
  }

  rep.worst = kInf;
  for (std::size_t j = 0; j < spec.time; ++j)
    for (std::size_t i = 0; i < spec.space; ++i) {
      const double v = rep.residuals[j * spec.space + i];
      if (v < rep.worst) {
        rep.worst = v;
        rep.worst_x = rep.x_centers[i];
        rep.worst_t = rep.t_centers[j];
      }
    }

  double dt_sum = 0.0;
  std::size_t dt_count = 0;
  for (const auto& st : traj.steps)
    if (st.dt > 0.0) {
      dt_sum += st.dt;
      ++dt_count;
    }
  rep.dt_mean = dt_count ? dt_sum / static_cast<double>(dt_count) : 0.0;
  rep.tol = spec.c_trunc * (dx + rep.dt_mean);
  rep.pass = rep.worst >= -rep.tol;
  return rep;
}

CoercivityReport coercivity_constants(Interval n_range, Interval N_range, const GasModel& m,
                                      std::size_t samples) {
  if (!(n_range.lo > 0.0) || !(N_range.lo > 0.0))
    throw DomainError("coercivity_constants: intervals must lie strictly above zero");
  if (n_range.hi < n_range.lo || N_range.hi < N_range.lo)
    throw DomainError("coercivity_constants: empty interval");
  if (samples < 2) throw DomainError("coercivity_constants: need at least two samples per axis");

  const double lo = std::min(n_range.lo, N_range.lo);
  const double hi = std::max(n_range.hi, N_range.hi);
  CoercivityReport rep;
  // p' is increasing for gamma > 1, so the extremes sit at the hull ends.
  rep.C1 = pressure_derivative(m, lo);
  rep.C2 = pressure_derivative(m, hi);

  auto at = [samples](Interval r, std::size_t k) {
    return r.lo + (r.hi - r.lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
  };
  for (std::size_t a = 0; a < samples; ++a)
    for (std::size_t b = 0; b < samples; ++b) {
      const double n = at(n_range, a);
      const double N = at(N_range, b);
      const double d = n - N;
      const double middle = (pressure(m, n) - pressure(m, N)) * d;
      const double lower = rep.C1 * d * d;
      const double upper = rep.C2 * d * d;
      const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(middle);
      ++rep.samples;
      if (middle < lower - slack || middle > upper + slack) ++rep.violations;
    }
  return rep;
}

double decay_functional(const State& state, const StationaryProfile& stat) {
  require_conforming(state.n, stat.N_tilde, "decay_functional");
  std::vector<double> f(state.n.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double dn = state.n[i] - stat.N_tilde[i];
    const double dE = state.E.values[i] - stat.E_tilde[i];
    f[i] = dn * dn + dE * dE + state.J[i] * state.J[i];
  }
  return trapezoid(f, stat.dx);
}

double lyapunov_value(const State& state, const StationaryProfile& stat, const GasModel& m, double Lambda) {
  require_conforming(state.n, stat.N_tilde, "lyapunov_value");
  std::vector<double> f(state.n.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double y = -(state.E.values[i] - stat.E_tilde[i]);
    const double eta = relative_entropy(m, {state.n[i], state.J[i]}, stat.N_tilde[i]);
    f[i] = Lambda * eta + 0.5 * Lambda * y * y + y * state.J[i] + 0.5 * y * y;
  }
  return trapezoid(f, stat.dx);
}

void require_lyapunov_weight(double Lambda, double doping_upper, double max_density) {
  const double need = doping_upper + max_density + 1.0;
  if (!(Lambda > need)) {
    std::ostringstream os;
    os << "Lambda = " << Lambda << " must exceed D^* + max n + 1 = " << need;
    throw PreconditionError(os.str());
  }
}

LyapunovSplit lyapunov_split(const State& state, const StationaryProfile& stat, const GasModel& m) {
  require_conforming(state.n, stat.N_tilde, "lyapunov_split");
  const std::size_t count = state.n.size();
  std::vector<double> a(count), b(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double y = -(state.E.values[i] - stat.E_tilde[i]);
    a[i] = relative_entropy(m, {state.n[i], state.J[i]}, stat.N_tilde[i]) + 0.5 * y * y;
    b[i] = y * state.J[i] + 0.5 * y * y;
  }
  return {trapezoid(a, stat.dx), trapezoid(b, stat.dx)};
}

LyapunovMonitor::LyapunovMonitor(const StationaryProfile& stat, const GasModel& m) : stat_(&stat), model_(m) {}

void LyapunovMonitor::observe(const State& s) {
  times_.push_back(s.t);
  splits_.push_back(lyapunov_split(s, *stat_, model_));
  max_n_ = std::max(max_n_, *std::max_element(s.n.begin(), s.n.end()));
}

LyapunovSeries LyapunovMonitor::series(double Lambda, double tol_rel) const {
  LyapunovSeries out;
  out.Lambda = Lambda;
  out.tol_rel = tol_rel;
  out.times = times_;
  out.values.reserve(splits_.size());
  for (const auto& sp : splits_) out.values.push_back(Lambda * sp.weighted + sp.rest);
  if (out.values.empty()) return out;
  const double L0 = out.values.front();
  const double scale = L0 > 0.0 ? L0 : 1.0;
  for (std::size_t k = 1; k < out.values.size(); ++k) {
    const double rise = out.values[k] - out.values[k - 1];
    out.max_increase = std::max(out.max_increase, rise / scale);
    if (rise > tol_rel * L0) ++out.increases;
  }
  return out;
}

LyapunovSeries lyapunov(const Trajectory& traj, const StationaryProfile& stat, const GasModel& m, double Lambda,
                        double doping_upper, double tol_rel) {
  LyapunovMonitor mon(stat, m);
  for (const auto& s : traj.snapshots) mon.observe(s);
  require_lyapunov_weight(Lambda, doping_upper, mon.max_density());
  return mon.series(Lambda, tol_rel);
}

DecayReport fit_decay_rate(std::span<const double> times, std::span<const double> values, FitWindow window) {
  if (times.size() != values.size()) throw ShapeError("fit_decay_rate: series lengths differ");
  DecayReport rep;
  rep.window = window;
  if (values.empty()) throw PreconditionError("fit_decay_rate: empty series");
  const double floor = 1e-14 * values.front();
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < window.t0 || times[k] > window.t1) continue;
    if (!(values[k] > floor) || !(values[k] > 0.0)) break;
    rep.times.push_back(times[k]);
    rep.values.push_back(values[k]);
  }
  rep.samples = rep.times.size();
  if (rep.samples < 10) {
    std::ostringstream os;
    os << "fit_decay_rate: window [" << window.t0 << ", " << window.t1 << "] holds " << rep.samples
       << " usable samples, need at least 10";
    throw PreconditionError(os.str());
  }

  const double cnt = static_cast<double>(rep.samples);
  double st = 0, sy = 0;
  for (std::size_t k = 0; k < rep.samples; ++k) {
    st += rep.times[k];
    sy += std::log(rep.values[k]);
  }
  const double mt = st / cnt, my = sy / cnt;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t k = 0; k < rep.samples; ++k) {
    const double dt = rep.times[k] - mt;
    const double dy = std::log(rep.values[k]) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  const double slope = sty / stt;
  const double intercept = my - slope * mt;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < rep.samples; ++k) {
    const double e = std::log(rep.values[k]) - (intercept + slope * rep.times[k]);
    ss_res += e * e;
  }
  rep.rate = -slope;
  rep.prefactor = std::exp(intercept);
  rep.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
  rep.pass = rep.rate > 0.0 && rep.r2 >= 0.98;
  return rep;
}

MassReport mass_series(const Trajectory& traj) {
  MassReport rep;
  for (const auto& s : traj.snapshots) {
    rep.times.push_back(s.t);
    rep.masses.push_back(trapezoid(s.n, traj.dx));
  }
  for (double mass : rep.masses) rep.max_drift = std::max(rep.max_drift, std::abs(mass - rep.masses.front()));
  return rep;
}

double y_identity_defect(const State& state, const StationaryProfile& stat) {
  require_conforming(state.n, stat.N_tilde, "y_identity_defect");
  double worst = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < state.n.size(); ++i) {
    if (i > 0)
      acc -= 0.5 * stat.dx * ((state.n[i - 1] - stat.N_tilde[i - 1]) + (state.n[i] - stat.N_tilde[i]));
    const double y_field = -(state.E.values[i] - stat.E_tilde[i]);
    worst = std::max(worst, std::abs(y_field - acc));
  }
  return worst;
}

Comparability lyapunov_comparability(std::span<const double> phi, std::span<const double> lyap) {
  if (phi.size() != lyap.size()) throw ShapeError("lyapunov_comparability: series lengths differ");
  Comparability c{kInf, 0.0};
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (!(phi[k] > 0.0)) continue;
    const double ratio = lyap[k] / phi[k];
    c.lower = std::min(c.lower, ratio);
    c.upper = std::max(c.upper, ratio);
  }
  if (c.lower == kInf) c.lower = 0.0;
  return c;
}

DiagnosticRecord to_record(const InvariantRegionReport& r) {
  DiagnosticRecord rec{"invariant_region", r.pass, {}, r.worst_x, r.worst_t};
  double mw = -kInf, mz = kInf;
  for (double v : r.max_wbar) mw = std::max(mw, v);
  for (double v : r.min_zbar) mz = std::min(mz, v);
  rec.scalars = {{"M", r.M},
                 {"tol", r.tol},
                 {"max_wbar", mw},
                 {"min_zbar", mz},
                 {"first_violation", r.first_violation.value_or(-1.0)},
                 {"indeterminate", static_cast<double>(r.indeterminate)}};
  return rec;
}

DiagnosticRecord to_record(const DensityBoundReport& r) {
  return {"density_bound",
          r.pass,
          {{"max_n", r.max_n},
           {"bound", r.bound},
           {"invariant_bound", r.invariant_bound},
           {"max_velocity", r.max_velocity}},
          std::nullopt,
          std::nullopt};
}

DiagnosticRecord to_record(const RegionSignReport& r) {
  return {"region_signs",
          r.pass,
          {{"a12", r.a12}, {"a21", r.a21}, {"max_R1", r.max_R1}, {"min_R2", r.min_R2}},
          std::nullopt,
          std::nullopt};
}

DiagnosticRecord to_record(const EntropyResidualReport& r, const std::string& pair_name) {
  return {"entropy_residual:" + pair_name,
          r.pass,
          {{"worst", r.worst},
           {"tol", r.tol},
           {"dt_mean", r.dt_mean},
           {"tests", static_cast<double>(r.residuals.size())}},
          r.worst_x,
          r.worst_t};
}

DiagnosticRecord to_record(const CoercivityReport& r) {
  return {"coercivity",
          r.violations == 0,
          {{"C1", r.C1},
           {"C2", r.C2},
           {"samples", static_cast<double>(r.samples)},
           {"violations", static_cast<double>(r.violations)}},
          std::nullopt,
          std::nullopt};
}

DiagnosticRecord to_record(const LyapunovSeries& r) {
  return {"lyapunov",
          r.increases == 0,
          {{"Lambda", r.Lambda},
           {"L0", r.values.empty() ? 0.0 : r.values.front()},
           {"L_final", r.values.empty() ? 0.0 : r.values.back()},
           {"increases", static_cast<double>(r.increases)},
           {"max_relative_increase", r.max_increase},
           {"tol_rel", r.tol_rel}},
          std::nullopt,
          std::nullopt};
}

DiagnosticRecord to_record(const DecayReport& r) {
  return {"decay",
          r.pass,
          {{"rate", r.rate},
           {"prefactor", r.prefactor},
           {"r2", r.r2},
           {"t0", r.window.t0},
           {"t1", r.window.t1},
           {"samples", static_cast<double>(r.samples)}},
          std::nullopt,
          std::nullopt};
}

DiagnosticRecord to_record(const MassReport& r) {
  return {"mass",
          true,
          {{"initial_mass", r.masses.empty() ? 0.0 : r.masses.front()},
           {"final_mass", r.masses.empty() ? 0.0 : r.masses.back()},
           {"max_drift", r.max_drift}},
          std::nullopt,
          std::nullopt};
}

}  // namespace ephydro
