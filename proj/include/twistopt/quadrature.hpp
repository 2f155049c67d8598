// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>

namespace twistopt::objective {

// Gauss-Hermite rule for the weight e^{-x^2} on the real line (physicists'
// convention): sum_i w_i f(x_i) integrates polynomials of degree <= 2n-1
// exactly. Nodes ascend.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  int order() const { return static_cast<int>(nodes.size()); }
};

QuadratureRule gauss_hermite(int n);

}  // namespace twistopt::objective
