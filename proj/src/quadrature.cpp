#include "ephydro/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace ephydro {

// Golub-Welsch on the symmetric Jacobi matrix of the Gegenbauer weight.
QuadratureRule gauss_gegenbauer(int count, double alpha) {
  if (count < 1) throw std::invalid_argument("gauss_gegenbauer: count must be positive");
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_gegenbauer: alpha must exceed -1");

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) {
    const double kd = k;
    const double off = std::sqrt(kd * (kd + 2.0 * alpha) /
                                 (4.0 * (kd + alpha) * (kd + alpha) - 1.0));
    jacobi(k - 1, k) = off;
    jacobi(k, k - 1) = off;
  }

  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(alpha + 1.0) /
                     std::tgamma(alpha + 1.5);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_gegenbauer: eigen decomposition failed");

  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (int j = 0; j < count; ++j) {
    const double v0 = solver.eigenvectors()(0, j);
    rule.nodes[j] = solver.eigenvalues()(j);
    rule.weights[j] = mu0 * v0 * v0;
  }
  // The rule is symmetric; fold rounding so odd moments vanish to the last bit.
  for (int j = 0; j < count / 2; ++j) {
    const int k = count - 1 - j;
    const double node = 0.5 * (rule.nodes[k] - rule.nodes[j]);
    const double weight = 0.5 * (rule.weights[j] + rule.weights[k]);
    rule.nodes[j] = -node;
    rule.nodes[k] = node;
    rule.weights[j] = weight;
    rule.weights[k] = weight;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

const QuadratureRule& cached_gauss_gegenbauer(int count, double alpha) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(count, alpha);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, gauss_gegenbauer(count, alpha)).first;
  return it->second;
}

}  // namespace ephydro
