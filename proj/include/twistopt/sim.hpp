// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <vector>

#include "twistopt/circuits.hpp"
#include "twistopt/collective.hpp"
#include "twistopt/noisemodel.hpp"
#include "twistopt/objective.hpp"
#include "twistopt/optimize.hpp"

// Engine dispatch: runs a protocol (probe, encoding, free evolution at phi,
// decoding, J_z measurement) on one of two exact backends and returns the
// conditional moments the estimator needs.
namespace twistopt::sim {

// kCollective integrates in the (N+1)-dimensional symmetric subspace and
// supports noiseless dynamics only. kTensornet uses matrix product states
// and operators, supporting correlated free-evolution dephasing and
// per-twist gate dephasing at polynomial bond dimension.
enum class Engine { kCollective, kTensornet };

// How the noisy tensor-network backend treats the circuit: kPerGate
// materializes each gate's action on the density operator (and folds the
// observables through the decoding gate by gate), kCompiled contracts whole
// gate sequences into permutation-invariant coefficient tables first.
enum class DecodingPath { kPerGate, kCompiled };

struct SimulationOptions {
  Engine engine = Engine::kCollective;
  DecodingPath decoding_path = DecodingPath::kCompiled;
  noisemodel::NoiseSpec noise;
  ParallelPolicy policy = ParallelPolicy::kOpenMP;
  std::size_t budget_bytes = std::size_t{2} << 30;
};

// <J_z> and <J_z^2> conditioned on one phase value.
collective::JzMoments protocol_moments(const circuits::ProtocolCircuits& pc,
                                       const std::vector<double>& params,
                                       int n_qubits, double phi,
                                       const SimulationOptions& opts);

// Moments across a grid of phases. Phase-independent work (compiled tables,
// folded observables, dephasing weight sums) happens once; the nodes then
// run under the requested parallel policy with per-node slots, so results
// are bitwise reproducible across policies.
objective::MomentCurve moment_curve(const circuits::ProtocolCircuits& pc,
                                    const std::vector<double>& params,
                                    int n_qubits,
                                    const std::vector<double>& phi,
                                    const SimulationOptions& opts);

// Conditional estimator statistics on a phase grid for a fixed constant a.
objective::EstimatorCurves estimator_curves(
    const circuits::ProtocolCircuits& pc, const std::vector<double>& params,
    int n_qubits, const std::vector<double>& phi, double a,
    const SimulationOptions& opts);

// Objective for the optimizer: parameters -> min over the estimator
// constant of BMSE / delta_phi^2.
optimize::ObjectiveFn make_bmse_objective(const circuits::ProtocolCircuits& pc,
                                          int n_qubits,
                                          const objective::GaussianPrior& prior,
                                          const objective::QuadratureRule& rule,
                                          const SimulationOptions& opts);

struct ProtocolEvaluation {
  double ratio = 0.0;  // min BMSE / delta_phi^2
  double a = 0.0;      // optimal estimator constant
  objective::BmseBreakdown breakdown;
};

ProtocolEvaluation evaluate_protocol(const circuits::ProtocolCircuits& pc,
                                     const std::vector<double>& params,
                                     int n_qubits,
                                     const objective::GaussianPrior& prior,
                                     const objective::QuadratureRule& rule,
                                     const SimulationOptions& opts);

// Sum over all basis pairs of each type of the correlated-dephasing weight
// exp(-s^T C s / 2); with c2 = 0 this is the multiplicity times
// exp(-c1 (t01 + t10) / 2), otherwise a transfer recursion over sites.
// Indexed by type rank.
std::vector<double> correlated_weights(int n_qubits,
                                       const noisemodel::NoiseSpec& spec);

}  // namespace twistopt::sim
