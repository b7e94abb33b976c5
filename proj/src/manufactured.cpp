#include "ephydro/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace ephydro {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDensityAmp = 0.25;
constexpr double kCurrentAmp = 0.1;
}  // namespace

TrigManufactured::TrigManufactured(GasModel model, double epsilon, DopingProfile doping)
    : model_(model), epsilon_(epsilon), doping_(std::move(doping)) {}

double TrigManufactured::n(double x, double t) const {
  return 1.0 + kDensityAmp * std::sin(2.0 * kPi * x) * std::exp(-t);
}

double TrigManufactured::J(double x, double t) const {
  return kCurrentAmp * std::sin(kPi * x) * (1.0 - std::exp(-t));
}

double TrigManufactured::source_n(double x, double t) const {
  const double decay = std::exp(-t);
  const double n_t = -kDensityAmp * std::sin(2.0 * kPi * x) * decay;
  const double n_xx = -4.0 * kPi * kPi * kDensityAmp * std::sin(2.0 * kPi * x) * decay;
  const double J_x = kCurrentAmp * kPi * std::cos(kPi * x) * (1.0 - decay);
  return n_t + J_x - epsilon_ * n_xx;
}

double TrigManufactured::source_J(double x, double t) const {
  const double decay = std::exp(-t);
  const double nv = n(x, t);
  const double Jv = J(x, t);
  const double n_x = 2.0 * kPi * kDensityAmp * std::cos(2.0 * kPi * x) * decay;
  const double J_t = kCurrentAmp * std::sin(kPi * x) * decay;
  const double J_x = kCurrentAmp * kPi * std::cos(kPi * x) * (1.0 - decay);
  const double J_xx = -kPi * kPi * kCurrentAmp * std::sin(kPi * x) * (1.0 - decay);
  const double flux_x = 2.0 * Jv * J_x / nv - Jv * Jv * n_x / (nv * nv) +
                        model_.gamma * model_.p0 * std::pow(nv, model_.gamma - 1.0) * n_x;
  // E* = int_0^x (n* - D)
  const double field = x + kDensityAmp * decay * (1.0 - std::cos(2.0 * kPi * x)) / (2.0 * kPi) -
                       doping_.antiderivative(x);
  return J_t + flux_x - epsilon_ * J_xx - nv * field + Jv + 2.0 * epsilon_ * n_x;
}

}  // namespace ephydro
