#pragma once

#include "ephydro/doping.hpp"

#include <span>
#include <vector>

namespace ephydro {

/// Electric field on the grid nodes, E(0) = 0.
struct FieldGrid {
  std::vector<double> values;
  double dx = 0.0;
};

/// E(x_i) = int_0^{x_i} (n - D) by the cumulative trapezoid rule.
FieldGrid field_from_density(std::span<const double> n, std::span<const double> doping, double dx);
FieldGrid field_from_density(std::span<const double> n, const DopingProfile& doping, double dx);

/// int_0^1 (n - D) dx; bitwise equal to the last entry of field_from_density.
double neutrality_defect(std::span<const double> n, std::span<const double> doping, double dx);
double neutrality_defect(std::span<const double> n, const DopingProfile& doping, double dx);

enum class NeutralBranch { unchanged, additive, multiplicative };

struct NeutralProjection {
  std::vector<double> n;
  NeutralBranch branch;
};

/// Makes initial data charge neutral: subtracts the defect when that keeps the
/// density strictly positive, otherwise rescales by int D / int n0.
NeutralProjection project_neutral(std::span<const double> n0, const DopingProfile& doping, double dx);

}  // namespace ephydro
