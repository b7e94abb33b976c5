#include "ephydro/gas_model.hpp"

#include "ephydro/errors.hpp"
#include "ephydro/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ephydro {

namespace {

void require_density(double n, const char* op) {
  if (!(n > 0.0)) throw VacuumError(std::string(op) + ": density must be positive, got " + std::to_string(n));
}

struct KernelSums {
  double eta = 0.0;
  double q = 0.0;
  double eta_J = 0.0;
  double scale = 0.0;  // n * int |g| (1-s^2)^lam, used for the self-check tolerance
};

KernelSums kernel_sums(const GasModel& m, const EntropyGenerator& gen, FluidPoint pt, int nodes) {
  const QuadratureRule& rule = cached_gauss_gegenbauer(nodes, m.lam);
  const double u = pt.J / pt.n;
  const double c = std::pow(pt.n, m.theta);
  KernelSums s;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double sn = rule.nodes[i];
    const double wt = rule.weights[i];
    const double xi = u + c * sn;
    const double g = gen.g(xi);
    s.eta += wt * g;
    s.q += wt * (u + m.theta * c * sn) * g;
    s.eta_J += wt * gen.dg(xi);
    s.scale += wt * (std::abs(g) + std::abs(gen.dg(xi)) * c);
  }
  s.eta *= pt.n;
  s.q *= pt.n;
  s.scale *= pt.n;
  return s;
}

}  // namespace

GasModel GasModel::from_gamma(double gamma) {
  if (!(gamma > 1.0 && gamma <= 3.0))
    throw DomainError("gamma must satisfy 1 < gamma <= 3, got " + std::to_string(gamma));
  GasModel m{};
  m.gamma = gamma;
  m.theta = 0.5 * (gamma - 1.0);
  m.p0 = m.theta * m.theta / gamma;
  m.lam = (3.0 - gamma) / (2.0 * (gamma - 1.0));
  return m;
}

double pressure(const GasModel& m, double n) {
  if (n < 0.0) throw DomainError("pressure: negative density " + std::to_string(n));
  return m.p0 * std::pow(n, m.gamma);
}

double pressure_derivative(const GasModel& m, double n) {
  if (n < 0.0) throw DomainError("pressure_derivative: negative density " + std::to_string(n));
  return m.gamma * m.p0 * std::pow(n, m.gamma - 1.0);
}

Eigenvalues eigenvalues(const GasModel& m, FluidPoint pt) {
  require_density(pt.n, "eigenvalues");
  const double u = pt.J / pt.n;
  const double c = m.theta * std::pow(pt.n, m.theta);
  return {u - c, u + c};
}

double max_wave_speed(const GasModel& m, FluidPoint pt) {
  require_density(pt.n, "max_wave_speed");
  return std::abs(pt.J / pt.n) + m.theta * std::pow(pt.n, m.theta);
}

RiemannPair to_invariants(const GasModel& m, FluidPoint pt) {
  require_density(pt.n, "to_invariants");
  const double u = pt.J / pt.n;
  const double c = std::pow(pt.n, m.theta);
  return {u + c, u - c};
}

FluidPoint from_invariants(const GasModel& m, RiemannPair rp) {
  if (rp.w < rp.z) throw DomainError("from_invariants: w < z");
  const double n = std::pow(0.5 * (rp.w - rp.z), 1.0 / m.theta);
  return {n, n * 0.5 * (rp.w + rp.z)};
}

EntropyPairValue mechanical_energy(const GasModel& m, FluidPoint pt) {
  if (pt.n < 0.0) throw DomainError("mechanical_energy: negative density");
  if (pt.n == 0.0) {
    if (pt.J != 0.0) throw VacuumError("mechanical_energy: nonzero current at vacuum");
    return {0.0, 0.0, 0.0};
  }
  const double u = pt.J / pt.n;
  const double internal = m.p0 / (m.gamma - 1.0);
  return {
      0.5 * pt.J * u + internal * std::pow(pt.n, m.gamma),
      0.5 * pt.J * u * u + m.gamma * internal * std::pow(pt.n, m.gamma - 1.0) * pt.J,
      u,
  };
}

EntropyGenerator monomial_generator(int power) {
  if (power < 0) throw DomainError("monomial_generator: negative power");
  EntropyGenerator gen;
  gen.g = [power](double xi) { return std::pow(xi, power); };
  gen.dg = [power](double xi) { return power == 0 ? 0.0 : power * std::pow(xi, power - 1); };
  return gen;
}

double kernel_mass(const GasModel& m) {
  return std::sqrt(std::numbers::pi) * std::tgamma(m.lam + 1.0) / std::tgamma(m.lam + 1.5);
}

double kernel_second_moment(const GasModel& m) { return kernel_mass(m) / (2.0 * m.lam + 3.0); }

EntropyPairValue weak_entropy_pair(const GasModel& m, const EntropyGenerator& gen, FluidPoint pt,
                                   int nodes, bool self_check) {
  require_density(pt.n, "weak_entropy_pair");
  const KernelSums base = kernel_sums(m, gen, pt, nodes);
  if (self_check) {
    const KernelSums fine = kernel_sums(m, gen, pt, 2 * nodes);
    const double tol = 1e-10 * (base.scale + fine.scale) + 1e-300;
    const bool agree = std::abs(base.eta - fine.eta) <= tol && std::abs(base.q - fine.q) <= tol &&
                       std::abs(base.eta_J - fine.eta_J) * pt.n <= tol;
    if (!agree)
      throw QuadratureError("weak_entropy_pair: " + std::to_string(nodes) + " and " +
                            std::to_string(2 * nodes) + " node results disagree");
  }
  return {base.eta, base.q, base.eta_J};
}

double relative_entropy(const GasModel& m, FluidPoint pt, double n_tilde) {
  if (!(pt.n > 0.0) || !(n_tilde > 0.0))
    throw DomainError("relative_entropy: densities must be positive");
  const double k = m.p0 / (m.gamma - 1.0);
  return mechanical_energy(m, pt).eta - k * std::pow(n_tilde, m.gamma) -
         k * m.gamma * std::pow(n_tilde, m.gamma - 1.0) * (pt.n - n_tilde);
}

}  // namespace ephydro
