// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "twistopt/circuits.hpp"
#include "twistopt/optimize.hpp"
#include "twistopt/results.hpp"
#include "twistopt/sim.hpp"

// Experiment drivers: protocol optimization with warm-start chains, and the
// sweep/evaluation campaigns the command line exposes. Drivers write one
// results CSV plus manifest and wall-time sidecars into an output
// directory, saving optimized parameters for downstream runs, and resume by
// skipping rows whose key is already present.
namespace twistopt::runner {

struct OptimizedProtocol {
  circuits::AnsatzSpec spec;
  std::vector<double> params;
  double ratio = 0.0;  // min BMSE / delta_phi^2
  double a = 0.0;
  int stages = 0;
  bool converged = false;
};

// One ansatz at one prior width. `init` empty means all-zero start.
OptimizedProtocol optimize_protocol(const circuits::AnsatzSpec& spec,
                                    int n_qubits, double delta_phi,
                                    int quad_nodes,
                                    const optimize::OptimizerConfig& cfg,
                                    const sim::SimulationOptions& opts,
                                    const std::vector<double>& init = {});

// Optimizes specs in order; with sequential_init each run warm-starts from
// the deepest compatible earlier optimum in the chain.
std::vector<OptimizedProtocol> optimize_chain(
    const std::vector<circuits::AnsatzSpec>& specs, int n_qubits,
    double delta_phi, int quad_nodes, const optimize::OptimizerConfig& cfg,
    const sim::SimulationOptions& opts, bool sequential_init = true);

struct ExperimentIo {
  std::string out_dir;
  std::string experiment;
  // Extra manifest entries (full command-line echo, seed, version).
  std::vector<std::pair<std::string, std::string>> extra;

  std::string csv_path() const { return out_dir + "/" + experiment + ".csv"; }
  std::string manifest_path() const {
    return out_dir + "/" + experiment + ".manifest";
  }
  std::string times_path() const {
    return out_dir + "/" + experiment + ".times";
  }
  std::string params_dir() const { return out_dir + "/" + experiment + "_params"; }
};

struct OptimizeSweepConfig {
  int n_qubits = 30;
  std::vector<circuits::AnsatzSpec> ansatzes;
  std::vector<double> delta_phis;
  int quad_nodes = 500;
  bool sequential_init = true;
  optimize::OptimizerConfig opt;
  sim::SimulationOptions sim_opts;
};

// Noiseless protocol optimization over a prior-width grid, chaining warm
// starts shallow-to-deep at each width. Saves parameters per
// (ansatz, delta_phi).
void run_optimize_sweep(const OptimizeSweepConfig& cfg,
                        const ExperimentIo& io);

struct NoiseGridConfig {
  int n_qubits = 30;
  circuits::AnsatzSpec ansatz;
  double delta_phi = 0.74;
  int quad_nodes = 25;
  // (c1, c2) cells; non-positive-semidefinite cells are recorded as skipped.
  std::vector<std::pair<double, double>> cells;
  sim::SimulationOptions sim_opts;
};

// Frozen-parameter evaluation across correlated-dephasing cells. Loads the
// parameters saved by a previous optimization into io.params_dir().
void run_noise_grid(const NoiseGridConfig& cfg, const ExperimentIo& io);

struct CircuitNoiseConfig {
  int n_qubits = 30;
  std::vector<circuits::AnsatzSpec> ansatzes;
  double delta_phi = 0.74;
  int quad_nodes = 25;
  std::vector<double> p_values;
  optimize::OptimizerConfig opt;
  sim::SimulationOptions sim_opts;
};

// Re-optimizes each ansatz at every twist-dephasing strength, warm-started
// from the saved noiseless parameters and then along the ascending p grid.
void run_circuit_noise(const CircuitNoiseConfig& cfg, const ExperimentIo& io);

struct BiasVarianceConfig {
  int n_qubits = 30;
  circuits::AnsatzSpec ansatz;
  double delta_phi = 0.74;
  int quad_nodes = 500;
  int phi_points = 41;
  double phi_span = 3.0;  // grid half-width in units of delta_phi
  sim::SimulationOptions sim_opts;
};

// Conditional estimator mean/variance/bias across a phase grid for saved
// parameters, written to <experiment>_curves.csv; a summary row goes into
// the main CSV.
void run_bias_variance(const BiasVarianceConfig& cfg, const ExperimentIo& io);

struct HyperStudyConfig {
  int n_qubits = 8;
  circuits::AnsatzSpec ansatz;
  double delta_phi = 0.74;
  std::vector<int> node_counts;
  std::vector<double> eps_values;   // applied to all three stage tolerances
  std::vector<bool> sequential_inits;
  optimize::OptimizerConfig opt;
  sim::SimulationOptions sim_opts;
};

// Optimizer hyperparameter grid (initialization x tolerance x quadrature
// order) for one ansatz; each cell is one row.
void run_hyper_study(const HyperStudyConfig& cfg, const ExperimentIo& io);

}  // namespace twistopt::runner
