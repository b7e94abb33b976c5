#include "ephydro/grid.hpp"

#include "ephydro/errors.hpp"

#include <string>

namespace ephydro {

Grid::Grid(std::size_t cells) : cells_(cells) {
  if (cells == 0) throw ShapeError("Grid: at least one cell required");
}

std::vector<double> Grid::coordinates() const {
  std::vector<double> xs(nodes());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = x(i);
  return xs;
}

Grid Grid::from_nodes(std::size_t node_count) {
  if (node_count < 2) throw ShapeError("Grid: need at least two nodes");
  return Grid(node_count - 1);
}

double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * dx;
}

void require_conforming(std::span<const double> a, std::span<const double> b, const char* op) {
  if (a.size() != b.size())
    throw ShapeError(std::string(op) + ": grid lengths differ (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
}

}  // namespace ephydro
