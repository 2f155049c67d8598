// SPDX-License-Identifier: MIT
#include "twistopt/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "twistopt/common.hpp"

namespace twistopt::objective {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix of the Hermite recurrence (diagonal 0, off-diagonal sqrt(k/2));
// weights are sqrt(pi) times the squared first components of the
// eigenvectors.
QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw ConfigError("quadrature order must be at least 1");
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Constant(1, std::sqrt(std::numbers::pi));
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    double v0 = solver.eigenvectors()(0, i);
    rule.weights(i) = sqrt_pi * v0 * v0;
  }
  // The rule is symmetric about zero; average the eigen-solver output across
  // the reflection so that paired nodes are exact negatives of each other.
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    double x = 0.5 * (rule.nodes(j) - rule.nodes(i));
    rule.nodes(i) = -x;
    rule.nodes(j) = x;
    double w = 0.5 * (rule.weights(i) + rule.weights(j));
    rule.weights(i) = w;
    rule.weights(j) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  return rule;
}

}  // namespace twistopt::objective
