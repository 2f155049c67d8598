// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "twistopt/circuits.hpp"
#include "twistopt/common.hpp"
#include "twistopt/tensornet.hpp"

// Permutation-invariant operators on N qubits, stored as one complex
// coefficient per bra/ket pair type. A basis element |x><y| is classified by
// the counts t01 = #{j: x_j=0, y_j=1}, t10, t11 (t00 implied); operators
// invariant under simultaneous qubit permutation assign equal coefficients
// to every pair of the same type, so O(N^3) numbers describe the full
// 4^N-dimensional operator, including its action outside the symmetric
// subspace.
namespace twistopt::pinv {

struct TypeVector {
  int t01 = 0;
  int t10 = 0;
  int t11 = 0;

  int norm() const { return t01 + t10 + t11; }
  int ket_weight() const { return t10 + t11; }
  int bra_weight() const { return t01 + t11; }
  bool operator==(const TypeVector&) const = default;
};

inline TypeVector transpose_type(const TypeVector& t) {
  return TypeVector{t.t10, t.t01, t.t11};
}

// Number of types with norm <= n: C(n+3, 3).
int type_count(int n_qubits);

// Canonical rank: increasing norm, then decreasing t01, then decreasing t10.
// Independent of N, so tables for different sizes share prefixes.
int type_rank(const TypeVector& t);
TypeVector type_at(int rank);

// N! / (t00! t01! t10! t11!): the number of basis pairs of this type.
double type_multiplicity(int n_qubits, const TypeVector& t);

struct PermInvOperator {
  int n_qubits = 0;
  std::vector<Complex> coeff;  // indexed by type_rank, norm <= n_qubits

  Complex at(const TypeVector& t) const {
    if (t.t01 < 0 || t.t10 < 0 || t.t11 < 0 || t.norm() > n_qubits)
      return Complex{0.0, 0.0};
    return coeff[static_cast<std::size_t>(type_rank(t))];
  }
  Complex& slot(const TypeVector& t) {
    return coeff[static_cast<std::size_t>(type_rank(t))];
  }
};

PermInvOperator zero_op(int n_qubits);
PermInvOperator identity_op(int n_qubits);

// Tensor power u^{\otimes N} of a single-qubit operator.
PermInvOperator from_single_qubit(int n_qubits, const Eigen::Matrix2cd& u);

PermInvOperator rotation_op(int n_qubits, const Axis& axis, double theta);
PermInvOperator twist_z_op(int n_qubits, double theta);
PermInvOperator jz_op(int n_qubits);
PermInvOperator jz2_op(int n_qubits);

// Density table of (|+><+|)^{\otimes N}: every coefficient 2^{-N}.
PermInvOperator plus_density(int n_qubits);

// Table for a gate on the collective spin; transverse twists expand into
// rotation-conjugated z twists.
PermInvOperator gate_to_pinv(int n_qubits, circuits::GateKind kind,
                             AxisLabel axis, double theta,
                             ParallelPolicy policy = ParallelPolicy::kSerial);

PermInvOperator dagger(const PermInvOperator& a);

// Exact product coefficients via the four-fold binomial sum; O(N^7) time.
PermInvOperator multiply(const PermInvOperator& a, const PermInvOperator& b,
                         ParallelPolicy policy = ParallelPolicy::kOpenMP);

// Product of a gate list in firing order (first gate applied first).
PermInvOperator compile_circuit(int n_qubits,
                                const circuits::GateSequence& seq,
                                const std::vector<double>& params,
                                ParallelPolicy policy = ParallelPolicy::kOpenMP);

Complex trace(const PermInvOperator& a);
Complex trace_product(const PermInvOperator& a, const PermInvOperator& b);

// Independent dephasing of strength p on every qubit: coefficients scale by
// (1-2p)^(t01+t10). Self-adjoint, so the same scaling serves Schroedinger
// and Heisenberg directions.
void scale_gate_dephasing(PermInvOperator& a, double p);

// Conjugation by exp(-i phi J_z): coefficients scale by
// exp(-i phi (t01 - t10)).
void scale_free_phase(PermInvOperator& a, double phi);

// Conjugation by exp(-i theta J_z^2): coefficients scale by
// exp(-i theta (m^2 - m'^2)), where m and m' are the J_z eigenvalues of the
// ket and bra weights the type fixes.
void scale_twist_phase(PermInvOperator& a, double theta);

// Density table from a symmetric-subspace density matrix (indexed by
// Hamming weight).
PermInvOperator density_from_dicke_table(const Eigen::MatrixXcd& rho_dicke);

// Symmetric-subspace block <D_a| A |D_b> of a table.
Eigen::MatrixXcd dicke_block(const PermInvOperator& a);

// Full 2^N x 2^N matrix; guarded to N <= 12.
Eigen::MatrixXcd lift_dense(const PermInvOperator& a);

// Type of a specific basis pair.
TypeVector pair_type(const std::vector<int>& ket_bits,
                     const std::vector<int>& bra_bits);

// ---- general-alphabet machinery -----------------------------------------
// Type vectors over an alphabet of d letters, stored as the d-1 counts of
// letters 1..d-1 (letter 0 implied). Rank order: increasing total, then
// decreasing first component, then decreasing second, and so on.
int gtype_rank(const std::vector<int>& t);
std::vector<int> gtype_at(int d, int rank);
int gtype_count(int d, int max_norm);  // #types with norm <= max_norm

// Exact MPS over d-dimensional sites for a symmetrized expansion whose
// string coefficients depend only on the letter-count type: coefficient of
// a basis string equals coeffs[gtype_rank(type of string)]. Minimal bond,
// growing as C(j+d-1, d-1) toward the widest cut.
tensornet::Mps typevec_mps(int d, int n_sites,
                           const std::vector<Complex>& coeffs);

// The same construction on the d^2 = 4 letter alphabet, reshaped into an
// MPO for the operator the table describes.
tensornet::Mpo pinv_to_mpo(const PermInvOperator& a);

// Inverse for an operator that is exactly permutation invariant: reads each
// type's coefficient off one representative basis pair. Used to restore the
// minimal bond after exact tensor-network products.
PermInvOperator table_from_mpo(const tensornet::Mpo& op);

}  // namespace twistopt::pinv
