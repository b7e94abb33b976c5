#pragma once

#include "ephydro/doping.hpp"
#include "ephydro/gas_model.hpp"

#include <memory>

namespace ephydro {

/// Exact fields plus the forcing that makes them solve the viscous system.
class ManufacturedSolution {
 public:
  virtual ~ManufacturedSolution() = default;

  virtual double n(double x, double t) const = 0;
  virtual double J(double x, double t) const = 0;
  virtual double source_n(double x, double t) const = 0;
  virtual double source_J(double x, double t) const = 0;
};

/// n* = 1 + 0.25 sin(2 pi x) e^{-t},  J* = 0.1 sin(pi x) (1 - e^{-t}).
/// Both end values are time independent (n* = 1, J* = 0), so the Dirichlet
/// boundary treatment reproduces them exactly.
class TrigManufactured final : public ManufacturedSolution {
 public:
  TrigManufactured(GasModel model, double epsilon, DopingProfile doping);

  double n(double x, double t) const override;
  double J(double x, double t) const override;
  double source_n(double x, double t) const override;
  double source_J(double x, double t) const override;

 private:
  GasModel model_;
  double epsilon_;
  DopingProfile doping_;
};

/// Rest state n* = c, J* = 0 against constant doping c: no forcing at all.
class ConstantManufactured final : public ManufacturedSolution {
 public:
  explicit ConstantManufactured(double c) : c_(c) {}

  double n(double, double) const override { return c_; }
  double J(double, double) const override { return 0.0; }
  double source_n(double, double) const override { return 0.0; }
  double source_J(double, double) const override { return 0.0; }

 private:
  double c_;
};

}  // namespace ephydro
