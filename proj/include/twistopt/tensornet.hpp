// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "twistopt/common.hpp"
#include "twistopt/noisemodel.hpp"

// Exact (truncation-free) matrix product representations. States carry one
// physical leg per site, operators two; density operators are ordinary MPOs.
// All chains use 1-dimensional boundary bonds, so full contractions are
// 1x1 matrices.
namespace twistopt::tensornet {

using Matrix = Eigen::MatrixXcd;

struct Mps {
  int n_sites = 0;
  int phys_dim = 2;
  // site[j][s]: left_bond x right_bond matrix for physical value s.
  std::vector<std::vector<Matrix>> site;

  int max_bond() const;
  std::size_t bytes() const;
};

struct Mpo {
  int n_sites = 0;
  int phys_dim = 2;
  // site[j][m * phys_dim + n]: m is the output (ket) leg, n the input (bra).
  std::vector<std::vector<Matrix>> site;

  int max_bond() const;
  std::size_t bytes() const;
};

// Density operators are stored as plain MPOs.
using DensityMpo = Mpo;

// Permutation-invariant state sum_x c_{|x|} |x>: bond grows linearly to
// floor(N/2)+1 at the widest cut.
Mps mps_from_weight_coeffs(int n_sites, const std::vector<Complex>& c);

// Inverse of the above for a state that is exactly permutation invariant:
// reads each weight's coefficient off one representative basis string.
std::vector<Complex> weight_coeffs_from_mps(const Mps& psi);

// Diagonal MPO whose basis-string phases depend only on Hamming weight.
Mpo mpo_from_weight_factors(int n_sites, const std::vector<Complex>& f);

// exp(-i theta Jz^2): diagonal with phases exp(-i theta (N-2w)^2 / 4).
Mpo mpo_twist_z(int n_sites, double theta);

// Single-qubit rotation exp(-i theta n.sigma / 2).
Eigen::Matrix2cd qubit_rotation(const Axis& axis, double theta);

// Global rotation exp(-i theta n.J): a product operator, bond 1.
Mpo mpo_rotation(int n_sites, const Axis& axis, double theta);

// Tensor power of one single-qubit operator.
Mpo product_mpo(int n_sites, const Eigen::Matrix2cd& u);

Mpo mpo_identity(int n_sites);
Mpo mpo_jz(int n_sites);   // bond 2
Mpo mpo_jz2(int n_sites);  // bond 3

// Exact products; output bond = product of input bonds.
Mps apply_mpo(const Mpo& op, const Mps& state);
Mpo apply_mpo(const Mpo& op, const Mpo& target);

Mpo dagger(const Mpo& op);

// u rho u^dagger, materialized. Throws ResourceError naming `stage` if the
// result would exceed budget_bytes.
DensityMpo conjugate_by_unitary(const DensityMpo& rho, const Mpo& u,
                                std::size_t budget_bytes, const char* stage);

// u^dagger obs u for Heisenberg-picture folding, same budget contract.
Mpo fold_observable(const Mpo& obs, const Mpo& u, std::size_t budget_bytes,
                    const char* stage);

Complex overlap(const Mps& bra, const Mps& ket);
Complex expectation(const Mps& psi, const Mpo& op);
Complex trace(const Mpo& op);
Complex trace_product(const Mpo& a, const Mpo& b);
inline Complex expectation_trace(const Mpo& obs, const DensityMpo& rho) {
  return trace_product(obs, rho);
}

// Density MPO of a symmetric-subspace density matrix (weight-basis indexed).
DensityMpo density_from_dicke(const Eigen::MatrixXcd& rho_dicke);

// Free-evolution channel: conjugation by exp(-i phi Jz) composed with the
// correlated-dephasing average. Acts element-wise in the bra/ket basis; the
// nearest-neighbour part of the weight multiplies the bond by 3.
DensityMpo free_evolution_apply(const DensityMpo& rho, double phi,
                                const noisemodel::NoiseSpec& spec);

// Independent dephasing of strength p on every qubit, element-wise. Works on
// density MPOs and (being self-adjoint) on Heisenberg observables alike.
void gate_dephasing_apply(Mpo& op, double p);

// Dense reconstructions for small-system tests.
Eigen::VectorXcd to_dense(const Mps& psi);   // n_sites <= 14
Eigen::MatrixXcd to_dense(const Mpo& op);    // n_sites <= 10

}  // namespace twistopt::tensornet
