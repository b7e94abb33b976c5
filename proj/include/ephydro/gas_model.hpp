#pragma once

#include <functional>

namespace ephydro {

/// Isentropic gamma-law closure p(n) = p0 n^gamma with p0 = theta^2 / gamma.
///
/// The derived constants are fixed functions of gamma:
///   theta = (gamma - 1) / 2,  p0 = theta^2 / gamma,  lam = (3 - gamma) / (2 (gamma - 1)).
/// Only 1 < gamma <= 3 is supported, which keeps 0 < theta <= 1 and lam >= 0.
struct GasModel {
  double gamma;
  double theta;
  double p0;
  double lam;

  /// Throws DomainError unless 1 < gamma <= 3.
  static GasModel from_gamma(double gamma);
};

/// Conserved pair (density, current density).
struct FluidPoint {
  double n;
  double J;
};

/// Riemann invariants w = u + n^theta, z = u - n^theta with u = J / n.
struct RiemannPair {
  double w;
  double z;
};

struct Eigenvalues {
  double lambda1;
  double lambda2;
};

/// Entropy density, its flux, and d(eta)/dJ at one state.
struct EntropyPairValue {
  double eta;
  double q;
  double eta_J;
};

double pressure(const GasModel& m, double n);
/// p'(n) = gamma p0 n^(gamma-1).
double pressure_derivative(const GasModel& m, double n);

Eigenvalues eigenvalues(const GasModel& m, FluidPoint pt);
/// max(|lambda1|, |lambda2|) = |u| + theta n^theta.
double max_wave_speed(const GasModel& m, FluidPoint pt);

RiemannPair to_invariants(const GasModel& m, FluidPoint pt);
FluidPoint from_invariants(const GasModel& m, RiemannPair rp);

/// Mechanical energy eta_e = J^2/(2n) + p0 n^gamma/(gamma-1) and its flux.
/// At n = 0 with J = 0 the pair extends continuously by zero.
EntropyPairValue mechanical_energy(const GasModel& m, FluidPoint pt);

/// Profile g of a weak entropy together with its derivative.
struct EntropyGenerator {
  std::function<double(double)> g;
  std::function<double(double)> dg;
};

/// Generator shortcuts for the families the diagnostics ship with.
EntropyGenerator monomial_generator(int power);

/// Kernel integrals c_lam = int (1-s^2)^lam ds and b_lam = int s^2 (1-s^2)^lam ds over [-1, 1].
double kernel_mass(const GasModel& m);
double kernel_second_moment(const GasModel& m);

inline constexpr int kWeakEntropyNodes = 64;

/// Weak entropy pair generated by g:
///   eta = n int g(u + n^theta s) (1-s^2)^lam ds
///   q   = n int (u + theta n^theta s) g(u + n^theta s) (1-s^2)^lam ds
///   eta_J = int g'(u + n^theta s) (1-s^2)^lam ds
/// Evaluated with `nodes` Gauss-Jacobi points. With `self_check`, the result is
/// recomputed at twice the node count and QuadratureError is thrown if the two
/// disagree by more than 1e-10 relative.
EntropyPairValue weak_entropy_pair(const GasModel& m, const EntropyGenerator& gen, FluidPoint pt,
                                   int nodes = kWeakEntropyNodes, bool self_check = true);

/// Relative entropy of (n, J) about the rest state (n_tilde, 0).
double relative_entropy(const GasModel& m, FluidPoint pt, double n_tilde);

}  // namespace ephydro
