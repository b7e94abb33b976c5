#include "ephydro/poisson.hpp"

#include "ephydro/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ephydro {

FieldGrid field_from_density(std::span<const double> n, std::span<const double> doping, double dx) {
  require_conforming(n, doping, "field_from_density");
  FieldGrid field{std::vector<double>(n.size(), 0.0), dx};
  double acc = 0.0;
  for (std::size_t i = 1; i < n.size(); ++i) {
    acc += 0.5 * dx * ((n[i - 1] - doping[i - 1]) + (n[i] - doping[i]));
    field.values[i] = acc;
  }
  return field;
}

FieldGrid field_from_density(std::span<const double> n, const DopingProfile& doping, double dx) {
  const auto d = doping.sample(Grid::from_nodes(n.size()));
  return field_from_density(n, d, dx);
}

double neutrality_defect(std::span<const double> n, std::span<const double> doping, double dx) {
  return field_from_density(n, doping, dx).values.back();
}

double neutrality_defect(std::span<const double> n, const DopingProfile& doping, double dx) {
  return field_from_density(n, doping, dx).values.back();
}

NeutralProjection project_neutral(std::span<const double> n0, const DopingProfile& doping, double dx) {
  if (n0.size() < 2) throw ShapeError("project_neutral: need at least two nodes");
  if (std::any_of(n0.begin(), n0.end(), [](double v) { return !(v >= 0.0); }))
    throw DomainError("project_neutral: initial density must be nonnegative");

  if (std::all_of(n0.begin(), n0.end(), [](double v) { return v == 0.0; }))
    throw InfeasibleError("project_neutral: zero initial density with positive doping");

  const auto d = doping.sample(Grid::from_nodes(n0.size()));
  const double defect = neutrality_defect(n0, d, dx);
  NeutralProjection out{std::vector<double>(n0.begin(), n0.end()), NeutralBranch::unchanged};
  if (defect == 0.0) return out;

  const double min_n = *std::min_element(n0.begin(), n0.end());
  if (min_n - defect > 0.0) {
    for (double& v : out.n) v -= defect;
    out.branch = NeutralBranch::additive;
  } else {
    const double mass = trapezoid(n0, dx);
    if (!(mass > 0.0)) throw InfeasibleError("project_neutral: zero initial density with positive doping");
    const double scale = trapezoid(d, dx) / mass;
    for (double& v : out.n) v *= scale;
    out.branch = NeutralBranch::multiplicative;
  }
  // One more additive pass removes the rounding left by either branch.
  const double residual = neutrality_defect(out.n, d, dx);
  if (residual != 0.0 && *std::min_element(out.n.begin(), out.n.end()) - residual > 0.0)
    for (double& v : out.n) v -= residual;
  return out;
}

}  // namespace ephydro
