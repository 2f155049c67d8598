// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "twistopt/common.hpp"

// Derivative-free / quasi-Newton hybrid optimization: a Nelder-Mead search,
// a quadratic-model (finite-difference Newton with line search) refinement,
// and an alternation of the two until consecutive stage optima agree.
namespace twistopt::optimize {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;
using GradientFn =
    std::function<std::vector<double>(const std::vector<double>&)>;

struct OptimizerConfig {
  double eps1 = 1e-13;  // Nelder-Mead simplex spread tolerance
  double eps2 = 1e-13;  // Newton consecutive-value tolerance
  double eps3 = 1e-13;  // alternation agreement tolerance
  int nm_max_iters = 20000;
  int newton_max_iters = 200;
  int max_rounds = 40;           // alternation stage-pair cap
  double simplex_step = 0.05;    // radians, per-coordinate initial offset
  double grad_step = 1e-6;       // central-difference gradient step
  double hess_step = 1e-4;       // finite-difference Hessian step
  std::uint64_t rng_seed = 0;    // reserved for random-restart utilities
};

struct StageRecord {
  std::string stage;         // "nelder-mead" or "newton"
  int iterations = 0;
  long evaluations = 0;
  double best_value = 0.0;
  std::string terminal;      // "converged", "max-iters", "no-progress"
};

struct OptimizationResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  std::vector<StageRecord> stages;
  // Stage-boundary objective values, seeded with f(x0); nonincreasing.
  std::vector<double> history;
};

// Simplex search with the textbook reflect/expand/contract/shrink
// coefficients (1, 2, 1/2, 1/2). Stops when the spread max-min of the vertex
// values drops to eps1 or the iteration cap is hit. Throws on non-finite
// objective values.
OptimizationResult nelder_mead(const ObjectiveFn& f,
                               const std::vector<double>& x0,
                               const OptimizerConfig& cfg);

// Newton iteration on a finite-difference quadratic model with backtracking
// line search; falls back to steepest descent when the model is not useful.
// Stops when consecutive iterate values agree to eps2.
OptimizationResult quadratic_refine(const ObjectiveFn& f,
                                    const GradientFn& grad,
                                    const std::vector<double>& x0,
                                    const OptimizerConfig& cfg);
// Same, with the gradient built internally by central differences.
OptimizationResult quadratic_refine(const ObjectiveFn& f,
                                    const std::vector<double>& x0,
                                    const OptimizerConfig& cfg);

// Full pipeline: Nelder-Mead and Newton stages alternate until the values at
// consecutive stage boundaries agree to eps3 (at least one stage always
// runs). The history is seeded with f(x0).
OptimizationResult alternate(const ObjectiveFn& f,
                             const std::vector<double>& x0,
                             const OptimizerConfig& cfg);

// Central finite-difference gradient of f with the given step.
std::vector<double> fd_gradient(const ObjectiveFn& f,
                                const std::vector<double>& x, double step);

}  // namespace twistopt::optimize
