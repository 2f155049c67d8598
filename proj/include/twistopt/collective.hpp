// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>

#include "twistopt/common.hpp"

// Exact collective-spin dynamics of N qubits restricted to the permutation
// symmetric subspace. States live in the (N+1)-dimensional basis indexed by
// Hamming weight w (number of excited qubits); the collective operators
// J_a = sum_j sigma_a^(j) / 2 act within it.
namespace twistopt::collective {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Symmetric-subspace state. amp[w] multiplies the normalized Dicke state of
// Hamming weight w, w = 0..n_qubits.
struct DickeState {
  int n_qubits = 0;
  Vector amp;

  int dim() const { return n_qubits + 1; }
};

// J_z is diagonal with eigenvalue (n - 2w)/2 at weight w.
double jz_eigenvalue(int n_qubits, int w);

Matrix op_jx(int n_qubits);
Matrix op_jy(int n_qubits);
Matrix op_jz(int n_qubits);
Matrix op_axis(int n_qubits, const Axis& axis);  // axis.n dotted into J

// Product state |+>^N expressed in the weight basis:
// amp[w] = sqrt(C(n,w)) / 2^(n/2).
DickeState coherent_plus(int n_qubits);

// exp(-i theta n.J) and exp(-i theta (n.J)^2) as dense (n+1)x(n+1) unitaries.
Matrix rotation(int n_qubits, const Axis& axis, double theta);
Matrix twist(int n_qubits, const Axis& axis, double theta);

// In-place gate application along a coordinate axis. Uses the cached
// eigendecomposition of the generator, so a gate costs two small dense
// mat-vecs; the z axis is diagonal and costs a scaling pass.
void apply_rotation(DickeState& state, AxisLabel axis, double theta);
void apply_twist(DickeState& state, AxisLabel axis, double theta);

// Free phase accumulation exp(-i phi J_z).
void apply_phase(DickeState& state, double phi);

// |amp[w]|^2 for w = 0..n.
std::vector<double> weight_distribution(const DickeState& state);

// <J_z> and <J_z^2>, computed from the weight distribution.
struct JzMoments {
  double first = 0.0;
  double second = 0.0;
};
JzMoments jz_moments(const DickeState& state);

// Warm the eigenbasis caches for a given size so later calls (possibly from
// parallel sections) only read.
void warm_caches(int n_qubits);

}  // namespace twistopt::collective
