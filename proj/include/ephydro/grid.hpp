#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ephydro {

/// Uniform node-centred grid on [0, 1]: nodes x_i = i / cells, i = 0..cells.
class Grid {
 public:
  explicit Grid(std::size_t cells);

  std::size_t cells() const noexcept { return cells_; }
  std::size_t nodes() const noexcept { return cells_ + 1; }
  double dx() const noexcept { return 1.0 / static_cast<double>(cells_); }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) / static_cast<double>(cells_); }
  std::vector<double> coordinates() const;

  /// Grid implied by a node array; throws ShapeError for fewer than two nodes.
  static Grid from_nodes(std::size_t node_count);

 private:
  std::size_t cells_;
};

/// Composite trapezoid over uniformly spaced samples.
double trapezoid(std::span<const double> f, double dx);

/// Throws ShapeError when the two spans differ in length.
void require_conforming(std::span<const double> a, std::span<const double> b, const char* op);

}  // namespace ephydro
