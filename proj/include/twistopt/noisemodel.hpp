// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "twistopt/common.hpp"

// Noise channels: spatially correlated dephasing during the free evolution
// (Gaussian random local phases with on-site variance c1 and nearest-
// neighbour covariance c2) and independent single-qubit dephasing of
// strength p after every twist.
namespace twistopt::noisemodel {

struct NoiseSpec {
  double c1 = 0.0;
  double c2 = 0.0;
  double p = 0.0;

  bool correlated() const { return c1 != 0.0 || c2 != 0.0; }
  bool gate_noise() const { return p != 0.0; }
  bool any() const { return correlated() || gate_noise(); }
};

// Tridiagonal phase covariance matrix: c1 on the diagonal, c2 on the first
// off-diagonals.
Eigen::MatrixXd correlation_matrix(const NoiseSpec& spec, int n_qubits);

// Smallest eigenvalue of the covariance matrix (analytically
// c1 - 2|c2| cos(pi/(n+1)), computed numerically here).
double min_covariance_eigenvalue(const NoiseSpec& spec, int n_qubits);

// Throws ConfigError when the covariance is not positive semidefinite
// (tolerance -1e-12) or p lies outside [0, 1/2].
void validate(const NoiseSpec& spec, int n_qubits);

// Averaging the random phases leaves each |m><n| matrix element multiplied
// by exp(-s^T C s / 2), where s_j = ((-1)^{m_j} - (-1)^{n_j}) / 2 takes
// values in {0, +1, -1}.
int phase_signature(int m_bit, int n_bit);
double dephasing_weight(const std::vector<int>& m_bits,
                        const std::vector<int>& n_bits,
                        const Eigen::MatrixXd& covariance);

// The same weight factorized over sites: prod_j local(s_j) * prod_j
// nn(s_j, s_{j+1}).
double weight_local_factor(const NoiseSpec& spec, int s);
double weight_nn_factor(const NoiseSpec& spec, int s_prev, int s);

// Independent dephasing E(rho) = (1-p) rho + p Z rho Z scales each
// off-diagonal element by 1-2p.
double gate_dephasing_factor(double p);

}  // namespace twistopt::noisemodel
