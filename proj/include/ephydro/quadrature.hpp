#pragma once

#include <vector>

namespace ephydro {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule for the symmetric weight (1 - s^2)^alpha on [-1, 1], alpha > -1.
/// Exact for polynomials up to degree 2 * count - 1. Nodes are ascending.
QuadratureRule gauss_gegenbauer(int count, double alpha);

/// Same rule, cached per (count, alpha). Thread-safe.
const QuadratureRule& cached_gauss_gegenbauer(int count, double alpha);

}  // namespace ephydro
