// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "twistopt/circuits.hpp"
#include "twistopt/collective.hpp"
#include "twistopt/noisemodel.hpp"

// Independent dense reference implementations used only by tests. States and
// operators live in the full 2^n computational-basis space (site 0 is the
// most significant bit); operator exponentials come from Hermitian
// eigendecompositions, never from the code paths under test.
namespace twistopt::testing {

// Bit of the basis index x at the given site; site 0 is the most
// significant bit.
int bit_at(Eigen::Index x, int n_qubits, int site);

// sum_j n.sigma^(j) / 2 as a dense Pauli sum.
Eigen::MatrixXcd dense_axis_j(int n_qubits, const Axis& axis);
Eigen::MatrixXcd dense_jz(int n_qubits);

// exp(-i theta n.J) and exp(-i theta (n.J)^2).
Eigen::MatrixXcd dense_rotation(int n_qubits, const Axis& axis, double theta);
Eigen::MatrixXcd dense_twist(int n_qubits, const Axis& axis, double theta);

Eigen::MatrixXcd dense_gate(int n_qubits, const circuits::Gate& gate,
                            const std::vector<double>& params);
// Full product of a gate sequence in time order (earliest gate rightmost).
Eigen::MatrixXcd dense_sequence(int n_qubits, const circuits::GateSequence& seq,
                                const std::vector<double>& params);

Eigen::VectorXcd dense_plus_state(int n_qubits);
// Embeds weight-basis amplitudes into the full space.
Eigen::VectorXcd dense_from_dicke(const collective::DickeState& state);

collective::JzMoments dense_state_moments(int n_qubits,
                                          const Eigen::VectorXcd& psi);

// Density-operator channel oracle. Transverse twists decompose into a
// rotation sandwich around a z twist, and per-site dephasing (strength p)
// acts between that z twist and the closing rotation, matching the
// convention of the code under test.
class DenseChannel {
 public:
  DenseChannel(int n_qubits, const noisemodel::NoiseSpec& spec);

  void apply_unitary(const Eigen::MatrixXcd& u);
  void apply_gate(const circuits::Gate& gate,
                  const std::vector<double>& params);
  void apply_sequence(const circuits::GateSequence& seq,
                      const std::vector<double>& params);
  // Phase accumulation exp(-i phi J_z) jointly with the correlated
  // dephasing weight on every matrix element.
  void free_evolution(double phi);
  // The per-site phase-flip channel on all sites.
  void dephase_all_sites();

  collective::JzMoments moments() const;
  const Eigen::MatrixXcd& rho() const { return rho_; }

 private:
  int n_;
  Eigen::Index dim_;
  double p_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXcd rho_;
};

// Runs probe -> encoding -> free evolution -> decoding through the channel
// oracle and returns the measured moments.
collective::JzMoments dense_protocol_moments(
    const circuits::ProtocolCircuits& pc, const std::vector<double>& params,
    int n_qubits, double phi, const noisemodel::NoiseSpec& spec);

std::vector<double> random_params(std::mt19937_64& rng, int count,
                                  double half_width = 1.5);

// Exact zxz factorization of an SU(2) element:
// u = R_z(alpha) R_x(beta) R_z(gamma) with R_n(t) = exp(-i t n.sigma / 2).
struct EulerZxz {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};
EulerZxz euler_zxz(const Eigen::Matrix2cd& u);

}  // namespace twistopt::testing
