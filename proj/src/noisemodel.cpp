// SPDX-License-Identifier: MIT
#include "twistopt/noisemodel.hpp"

#include <cmath>

namespace twistopt::noisemodel {

Eigen::MatrixXd correlation_matrix(const NoiseSpec& spec, int n_qubits) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_qubits, n_qubits);
  for (int j = 0; j < n_qubits; ++j) {
    c(j, j) = spec.c1;
    if (j + 1 < n_qubits) {
      c(j, j + 1) = spec.c2;
      c(j + 1, j) = spec.c2;
    }
  }
  return c;
}

double min_covariance_eigenvalue(const NoiseSpec& spec, int n_qubits) {
  if (n_qubits == 1) return spec.c1;
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n_qubits, spec.c1);
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(n_qubits - 1, spec.c2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

void validate(const NoiseSpec& spec, int n_qubits) {
  if (spec.p < 0.0 || spec.p > 0.5)
    throw ConfigError("dephasing strength p must lie in [0, 1/2]");
  if (spec.c1 < 0.0)
    throw ConfigError("phase variance c1 must be non-negative");
  if (spec.correlated() &&
      min_covariance_eigenvalue(spec, n_qubits) < -1e-12)
    throw ConfigError("phase covariance matrix is not positive semidefinite");
}

int phase_signature(int m_bit, int n_bit) {
  return ((m_bit == 0 ? 1 : -1) - (n_bit == 0 ? 1 : -1)) / 2;
}

double dephasing_weight(const std::vector<int>& m_bits,
                        const std::vector<int>& n_bits,
                        const Eigen::MatrixXd& covariance) {
  auto n = static_cast<Eigen::Index>(m_bits.size());
  Eigen::VectorXd s(n);
  for (Eigen::Index j = 0; j < n; ++j)
    s(j) = phase_signature(m_bits[static_cast<std::size_t>(j)],
                           n_bits[static_cast<std::size_t>(j)]);
  return std::exp(-0.5 * s.dot(covariance * s));
}

double weight_local_factor(const NoiseSpec& spec, int s) {
  return std::exp(-0.5 * spec.c1 * s * s);
}

double weight_nn_factor(const NoiseSpec& spec, int s_prev, int s) {
  return std::exp(-spec.c2 * s_prev * s);
}

double gate_dephasing_factor(double p) { return 1.0 - 2.0 * p; }

}  // namespace twistopt::noisemodel
