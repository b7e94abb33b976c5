#include "ephydro/errors.hpp"
#include "ephydro/gas_model.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ephydro;
using testutil::close;

TEST_CASE("gas constants follow from gamma") {
  const auto m = GasModel::from_gamma(2.0);
  CHECK(m.theta == doctest::Approx(0.5));
  CHECK(m.p0 == doctest::Approx(0.125));
  CHECK(m.lam == doctest::Approx(0.5));

  const auto m3 = GasModel::from_gamma(3.0);
  CHECK(m3.theta == doctest::Approx(1.0));
  CHECK(m3.p0 == doctest::Approx(1.0 / 3.0));
  CHECK(m3.lam == doctest::Approx(0.0));

  CHECK_THROWS_AS(GasModel::from_gamma(1.0), DomainError);
  CHECK_THROWS_AS(GasModel::from_gamma(3.5), DomainError);
  CHECK_NOTHROW(GasModel::from_gamma(1.0 + 1e-9));
}

TEST_CASE("pressure and eigenstructure") {
  const auto m = GasModel::from_gamma(2.0);
  CHECK(pressure(m, 2.0) == doctest::Approx(0.5));
  CHECK(pressure_derivative(m, 1.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(pressure(m, -1.0), DomainError);
  CHECK(pressure(m, 0.0) == 0.0);
  CHECK(pressure(GasModel::from_gamma(3.0), 2.0) == doctest::Approx(8.0 / 3.0));
  const auto ev11 = eigenvalues(m, {1.0, 1.0});
  CHECK(ev11.lambda1 == doctest::Approx(0.5));
  CHECK(ev11.lambda2 == doctest::Approx(1.5));
  const auto ev8 = eigenvalues(GasModel::from_gamma(5.0 / 3.0), {8.0, 0.0});
  CHECK(ev8.lambda2 == doctest::Approx(2.0 / 3.0));

  // n = 1, J = 0: lambda = -/+ theta
  const auto ev = eigenvalues(m, {1.0, 0.0});
  CHECK(ev.lambda1 == doctest::Approx(-0.5));
  CHECK(ev.lambda2 == doctest::Approx(0.5));
  CHECK(max_wave_speed(m, {1.0, 0.0}) == doctest::Approx(0.5));
  // eigenvalues are the roots of lambda^2 - 2u lambda + u^2 - p'(n)
  const double n = 1.7, J = -0.4, u = J / n;
  const auto e2 = eigenvalues(m, {n, J});
  for (double l : {e2.lambda1, e2.lambda2})
    CHECK(l * l - 2 * u * l + u * u - pressure_derivative(m, n) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(eigenvalues(m, {0.0, 0.0}), VacuumError);
}

TEST_CASE("riemann invariants at rest") {
  const auto m = GasModel::from_gamma(2.0);
  const auto rp = to_invariants(m, {1.0, 0.0});
  CHECK(rp.w == doctest::Approx(1.0));
  CHECK(rp.z == doctest::Approx(-1.0));
  const auto rp44 = to_invariants(m, {4.0, 4.0});
  CHECK(rp44.w == doctest::Approx(3.0));
  CHECK(rp44.z == doctest::Approx(-1.0));
  const auto p44 = from_invariants(m, {3.0, -1.0});
  CHECK(p44.n == doctest::Approx(4.0));
  CHECK(p44.J == doctest::Approx(4.0));
  const auto rp3 = to_invariants(GasModel::from_gamma(3.0), {0.25, 0.0});
  CHECK(rp3.w == doctest::Approx(0.25));
  CHECK_THROWS_AS(from_invariants(m, {-1.0, 1.0}), DomainError);
  const auto back = from_invariants(m, {1.0, 1.0});
  CHECK(back.n == 0.0);
  CHECK(back.J == 0.0);
}

TEST_CASE("riemann invariant round trip on random states") {
  testutil::Rng rng(11);
  for (double gamma : {1.2, 1.5, 2.0, 3.0}) {
    const auto m = GasModel::from_gamma(gamma);
    for (int k = 0; k < 1000; ++k) {
      const double n = rng.uniform(0.05, 5.0);
      const double J = rng.uniform(-3.0, 3.0);
      const auto p = from_invariants(m, to_invariants(m, {n, J}));
      CHECK(close(p.n, n, 1e-10));
      CHECK(close(p.J, J, 1e-10, 1e-12));
    }
  }
}

TEST_CASE("mechanical energy values") {
  const auto m = GasModel::from_gamma(2.0);
  const auto v = mechanical_energy(m, {1.0, 0.0});
  CHECK(v.eta == doctest::Approx(0.125));
  CHECK(v.q == 0.0);
  CHECK(v.eta_J == 0.0);
  // q = u (eta + p): 0.5 + 2 * 0.125 at (1, 1); this is what flux compatibility requires
  const auto moving = mechanical_energy(m, {1.0, 1.0});
  CHECK(moving.eta == doctest::Approx(0.625));
  CHECK(moving.q == doctest::Approx(0.75));
  CHECK(mechanical_energy(GasModel::from_gamma(1.5), {2.0, 0.0}).q == 0.0);
  const auto vac = mechanical_energy(m, {0.0, 0.0});
  CHECK(vac.eta == 0.0);
  CHECK(vac.q == 0.0);
  CHECK_THROWS_AS(mechanical_energy(m, {0.0, 0.1}), VacuumError);
}

namespace {

// Flux F(n, J) = (J, J^2/n + p(n)).
void flux_jacobian(const GasModel& m, double n, double J, double a[2][2]) {
  const double u = J / n;
  a[0][0] = 0.0;
  a[0][1] = 1.0;
  a[1][0] = -u * u + pressure_derivative(m, n);
  a[1][1] = 2.0 * u;
}

}  // namespace

TEST_CASE("mechanical pair is flux compatible and convex") {
  testutil::Rng rng(5);
  for (double gamma : {1.4, 2.0, 3.0}) {
    const auto m = GasModel::from_gamma(gamma);
    for (int k = 0; k < 1000; ++k) {
      const double n = rng.uniform(0.2, 3.0);
      const double J = rng.uniform(-2.0, 2.0);
      const double hn = 1e-5 * n, hJ = 1e-5;
      auto eta = [&](double a, double b) { return mechanical_energy(m, {a, b}).eta; };
      auto q = [&](double a, double b) { return mechanical_energy(m, {a, b}).q; };
      const double eta_n = (eta(n + hn, J) - eta(n - hn, J)) / (2 * hn);
      const double eta_J = (eta(n, J + hJ) - eta(n, J - hJ)) / (2 * hJ);
      const double q_n = (q(n + hn, J) - q(n - hn, J)) / (2 * hn);
      const double q_J = (q(n, J + hJ) - q(n, J - hJ)) / (2 * hJ);
      double a[2][2];
      flux_jacobian(m, n, J, a);
      // grad q = grad eta . dF
      CHECK(close(q_n, eta_n * a[0][0] + eta_J * a[1][0], 1e-6, 1e-8));
      CHECK(close(q_J, eta_n * a[0][1] + eta_J * a[1][1], 1e-6, 1e-8));
      CHECK(close(mechanical_energy(m, {n, J}).eta_J, eta_J, 1e-6, 1e-9));

      // Hessian by second differences
      const double e0 = eta(n, J);
      const double h_nn = (eta(n + hn, J) - 2 * e0 + eta(n - hn, J)) / (hn * hn);
      const double h_JJ = (eta(n, J + hJ) - 2 * e0 + eta(n, J - hJ)) / (hJ * hJ);
      const double h_nJ = (eta(n + hn, J + hJ) - eta(n + hn, J - hJ) - eta(n - hn, J + hJ) + eta(n - hn, J - hJ)) /
                          (4 * hn * hJ);
      // exact Hessian: [[J^2/n^3 + p'(n)/n, -J/n^2], [-J/n^2, 1/n]], positive semidefinite
      const double e_nn = J * J / (n * n * n) + pressure_derivative(m, n) / n;
      CHECK(close(h_nn, e_nn, 1e-4, 1e-6));
      CHECK(close(h_JJ, 1.0 / n, 1e-4));
      CHECK(close(h_nJ, -J / (n * n), 1e-4, 1e-6));
      CHECK(e_nn >= 0.0);
      CHECK(e_nn * (1.0 / n) - (J / (n * n)) * (J / (n * n)) >= -1e-12 * e_nn / n);
    }
  }
}

TEST_CASE("kernel moments") {
  const auto m2 = GasModel::from_gamma(2.0);  // lam = 1/2
  CHECK(kernel_mass(m2) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
  CHECK(kernel_second_moment(m2) == doctest::Approx(std::numbers::pi / 8).epsilon(1e-14));
  const auto m3 = GasModel::from_gamma(3.0);  // lam = 0
  CHECK(kernel_mass(m3) == doctest::Approx(2.0));
  CHECK(kernel_second_moment(m3) == doctest::Approx(2.0 / 3.0));
  for (double gamma : {1.3, 1.5, 5.0 / 3.0, 2.5}) {
    const auto m = GasModel::from_gamma(gamma);
    auto w = [&](double s) { return std::pow(1 - s * s, m.lam); };
    CHECK(kernel_mass(m) == doctest::Approx(testutil::simpson(w, -1, 1, 1e-13)).epsilon(1e-9));
    CHECK(kernel_second_moment(m) ==
          doctest::Approx(testutil::simpson([&](double s) { return s * s * w(s); }, -1, 1, 1e-13)).epsilon(1e-9));
  }
}

TEST_CASE("weak entropy identities for g = 1 and g = xi") {
  testutil::Rng rng(7);
  for (double gamma : {1.5, 2.0, 3.0}) {
    const auto m = GasModel::from_gamma(gamma);
    const double c = kernel_mass(m), b = kernel_second_moment(m);
    const auto one = monomial_generator(0);
    const auto lin = monomial_generator(1);
    for (int k = 0; k < 1000; ++k) {
      const double n = rng.uniform(0.05, 4.0);
      const double J = rng.uniform(-3.0, 3.0);
      const double u = J / n;
      const auto v1 = weak_entropy_pair(m, one, {n, J});
      CHECK(close(v1.eta, n * c, 1e-6));
      CHECK(close(v1.q, J * c, 1e-6, 1e-12));
      CHECK(std::abs(v1.eta_J) <= 1e-12);
      const auto v2 = weak_entropy_pair(m, lin, {n, J});
      CHECK(close(v2.eta, J * c, 1e-6, 1e-12));
      CHECK(close(v2.q, n * (u * u * c + m.theta * std::pow(n, 2 * m.theta) * b), 1e-6));
      CHECK(close(v2.eta_J, c, 1e-6));
    }
  }
}

TEST_CASE("weak entropy with g = xi^2 / 2 has a closed form") {
  // eta = c_lam J^2 / (2n) + (b_lam / 2) n^gamma
  testutil::Rng rng(13);
  EntropyGenerator half_square{[](double xi) { return 0.5 * xi * xi; }, [](double xi) { return xi; }};
  for (double gamma : {1.5, 2.0, 3.0}) {
    const auto m = GasModel::from_gamma(gamma);
    for (int k = 0; k < 100; ++k) {
      const double n = rng.uniform(0.1, 3.0), J = rng.uniform(-2.0, 2.0);
      const double ref = kernel_mass(m) * J * J / (2 * n) + 0.5 * kernel_second_moment(m) * std::pow(n, gamma);
      CHECK(close(weak_entropy_pair(m, half_square, {n, J}).eta, ref, 1e-10, 1e-14));
    }
  }
}

TEST_CASE("weak entropy against adaptive Simpson") {
  for (double gamma : {1.5, 2.0, 3.0}) {
    const auto m = GasModel::from_gamma(gamma);
    const auto gen = monomial_generator(4);
    for (auto [n, J] : {std::pair{0.7, 0.2}, std::pair{1.3, -0.5}, std::pair{2.0, 1.0}}) {
      const double u = J / n, c = std::pow(n, m.theta);
      auto w = [&](double s) { return std::pow(1 - s * s, m.lam); };
      const double eta = n * testutil::simpson([&](double s) { return std::pow(u + c * s, 4) * w(s); }, -1, 1, 1e-13);
      const double q = n * testutil::simpson(
                               [&](double s) { return (u + m.theta * c * s) * std::pow(u + c * s, 4) * w(s); }, -1,
                               1, 1e-13);
      const double eJ = testutil::simpson([&](double s) { return 4 * std::pow(u + c * s, 3) * w(s); }, -1, 1, 1e-13);
      const auto v = weak_entropy_pair(m, gen, {n, J});
      CHECK(close(v.eta, eta, 1e-6));
      CHECK(close(v.q, q, 1e-6, 1e-9));
      CHECK(close(v.eta_J, eJ, 1e-6, 1e-9));
    }
  }
}

TEST_CASE("weak entropy with a convex generator is convex along random segments") {
  const auto m = GasModel::from_gamma(2.0);
  const auto gen = monomial_generator(4);
  testutil::Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const FluidPoint a{rng.uniform(0.2, 2.0), rng.uniform(-1, 1)};
    const FluidPoint b{rng.uniform(0.2, 2.0), rng.uniform(-1, 1)};
    const FluidPoint mid{0.5 * (a.n + b.n), 0.5 * (a.J + b.J)};
    const double lhs = weak_entropy_pair(m, gen, mid).eta;
    const double rhs = 0.5 * (weak_entropy_pair(m, gen, a).eta + weak_entropy_pair(m, gen, b).eta);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("weak entropy refuses vacuum") {
  const auto m = GasModel::from_gamma(2.0);
  CHECK_THROWS_AS(weak_entropy_pair(m, monomial_generator(2), {0.0, 0.0}), VacuumError);
}

TEST_CASE("relative entropy") {
  const auto m = GasModel::from_gamma(2.0);
  CHECK(relative_entropy(m, {1.3, 0.0}, 1.3) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(relative_entropy(m, {2.0, 0.0}, 1.0) == doctest::Approx(0.125));
  CHECK(relative_entropy(m, {1.3, 0.4}, 1.3) == doctest::Approx(0.16 / 2.6));
  // gamma = 2: eta_* = J^2/(2n) + p0 (n - N)^2
  CHECK(relative_entropy(m, {1.5, 0.3}, 1.0) == doctest::Approx(0.09 / 3.0 + 0.125 * 0.25));
  testutil::Rng rng(9);
  for (double gamma : {1.5, 3.0})
    for (int k = 0; k < 200; ++k)
      CHECK(relative_entropy(GasModel::from_gamma(gamma), {rng.uniform(0.1, 3), rng.uniform(-1, 1)},
                             rng.uniform(0.1, 3)) >= -1e-14);
  CHECK_THROWS_AS(relative_entropy(m, {0.0, 0.0}, 1.0), DomainError);
}
