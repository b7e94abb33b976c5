#include "ephydro/stationary.hpp"

#include "ephydro/errors.hpp"
#include "ephydro/grid.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace ephydro {

ShotResult shoot(double N0, const DopingProfile& doping, const GasModel& m, std::size_t cells) {
  if (!(N0 > 0.0)) throw DomainError("shoot: trial boundary density must be positive");
  const Grid grid(cells);
  const double h = grid.dx();
  const double collapse = doping.lower() / 10.0;
  const double coeff = 1.0 / (m.p0 * m.gamma);

  using Vec = std::array<double, 2>;
  auto f = [&](double x, const Vec& y) -> Vec {
    return {coeff * y[1] * std::pow(y[0], 2.0 - m.gamma), y[0] - doping(x)};
  };

  ShotResult result;
  auto& prof = result.profile;
  prof.dx = h;
  prof.N_tilde.assign(grid.nodes(), 0.0);
  prof.E_tilde.assign(grid.nodes(), 0.0);
  prof.N_tilde[0] = N0;

  const double inf = std::numeric_limits<double>::infinity();
  Vec y{N0, 0.0};
  for (std::size_t i = 0; i < cells; ++i) {
    const double x = grid.x(i);
    const Vec k1 = f(x, y);
    const Vec y2{y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]};
    if (!(y2[0] > collapse)) { result.outcome = ShotOutcome::collapsed; result.residual = -inf; return result; }
    const Vec k2 = f(x + 0.5 * h, y2);
    const Vec y3{y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]};
    if (!(y3[0] > collapse)) { result.outcome = ShotOutcome::collapsed; result.residual = -inf; return result; }
    const Vec k3 = f(x + 0.5 * h, y3);
    const Vec y4{y[0] + h * k3[0], y[1] + h * k3[1]};
    if (!(y4[0] > collapse)) { result.outcome = ShotOutcome::collapsed; result.residual = -inf; return result; }
    const Vec k4 = f(x + h, y4);
    y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
      result.outcome = ShotOutcome::diverged;
      result.residual = inf;
      return result;
    }
    if (!(y[0] > collapse)) { result.outcome = ShotOutcome::collapsed; result.residual = -inf; return result; }
    prof.N_tilde[i + 1] = y[0];
    prof.E_tilde[i + 1] = y[1];
  }
  result.residual = y[1];
  prof.shoot_residual = std::abs(y[1]);
  return result;
}

StationaryProfile solve_stationary(const DopingProfile& doping, const GasModel& m, std::size_t cells,
                                   StationaryOptions opts) {
  double lo = 0.5 * doping.lower();
  double hi = 2.0 * doping.upper();
  ShotResult r_lo = shoot(lo, doping, m, cells);
  ShotResult r_hi = shoot(hi, doping, m, cells);
  if (r_lo.outcome == ShotOutcome::ok && std::abs(r_lo.residual) <= opts.tol) return r_lo.profile;
  if (r_hi.outcome == ShotOutcome::ok && std::abs(r_hi.residual) <= opts.tol) return r_hi.profile;
  if (!(r_lo.residual < 0.0 && r_hi.residual > 0.0)) {
    std::ostringstream os;
    os << "solve_stationary: no sign change on [" << lo << ", " << hi << "], residuals " << r_lo.residual
       << " and " << r_hi.residual;
    throw BracketError(os.str(), r_lo.residual, r_hi.residual);
  }

  ShotResult best = r_lo;
  double res_lo = r_lo.residual, res_hi = r_hi.residual;
  std::size_t it = 0;
  auto consider = [&](ShotResult r, double trial) {
    if (r.outcome == ShotOutcome::ok &&
        (best.outcome != ShotOutcome::ok || std::abs(r.residual) < std::abs(best.residual)))
      best = r;
    if (r.residual < 0.0) {
      lo = trial;
      res_lo = r.residual;
    } else {
      hi = trial;
      res_hi = r.residual;
    }
  };
  while (it < opts.max_iterations) {
    ++it;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    consider(shoot(mid, doping, m, cells), mid);
    if (best.outcome == ShotOutcome::ok && std::abs(best.residual) <= opts.tol) break;
  }
  // A few secant steps inside the final bracket take the residual from tol down
  // to rounding when the residual is smooth; they are kept only if they improve.
  for (int k = 0; k < 3 && best.outcome == ShotOutcome::ok && best.residual != 0.0; ++k) {
    if (!std::isfinite(res_lo) || !std::isfinite(res_hi) || res_hi == res_lo) break;
    const double trial = lo - res_lo * (hi - lo) / (res_hi - res_lo);
    if (!(trial > lo && trial < hi)) break;
    const double before = std::abs(best.residual);
    consider(shoot(trial, doping, m, cells), trial);
    ++it;
    if (!(std::abs(best.residual) < before)) break;
  }
  if (best.outcome != ShotOutcome::ok)
    throw BracketError("solve_stationary: no feasible trial found", r_lo.residual, r_hi.residual);
  best.profile.iterations = it;
  best.profile.shoot_residual = std::abs(best.residual);
  return best.profile;
}

}  // namespace ephydro
