// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "twistopt/common.hpp"
#include "twistopt/quadrature.hpp"

// Bayesian mean squared error of a linear estimator phi_est = a * m, where m
// is the measured J_z value, under a zero-mean Gaussian prior on the phase.
namespace twistopt::objective {

struct GaussianPrior {
  double delta_phi = 0.0;  // prior standard deviation, radians
};

// Per-node conditional moments of J_z after the full protocol, evaluated at
// the prior's quadrature nodes phi_i = sqrt(2) * delta_phi * x_i.
struct MomentCurve {
  std::vector<double> phi;
  std::vector<double> jz;
  std::vector<double> jz2;

  std::size_t size() const { return phi.size(); }
};

// Phase values the prior average runs over for a given rule.
std::vector<double> phi_nodes(const GaussianPrior& prior,
                              const QuadratureRule& rule);

struct EstimatorConfig {
  double a = 0.0;  // radians per unit J_z
};

// Prior-averaged ingredients of the error: avg_phi_jz = <phi <J_z>_phi> and
// avg_jz2 = <<J_z^2>_phi>. The error as a function of the estimator constant
// is delta_phi^2 - 2 a avg_phi_jz + a^2 avg_jz2.
struct BmseBreakdown {
  double delta_phi = 0.0;
  double avg_phi_jz = 0.0;
  double avg_jz2 = 0.0;

  double bmse(double a) const {
    return delta_phi * delta_phi - 2.0 * a * avg_phi_jz + a * a * avg_jz2;
  }
  // Optimal a, with the degenerate all-zero-signal case mapping to a = 0.
  double a_opt_or_zero() const {
    if (avg_jz2 < 1e-14) return 0.0;
    return avg_phi_jz / avg_jz2;
  }
  double min_bmse() const { return bmse(a_opt_or_zero()); }
  // Dimensionless objective, = 1 for a dead estimator.
  double min_ratio() const {
    return min_bmse() / (delta_phi * delta_phi);
  }
};

BmseBreakdown accumulate_bmse(const MomentCurve& curve,
                              const QuadratureRule& rule,
                              const GaussianPrior& prior);

// Optimal estimator constant; throws ConfigError when the averaged second
// moment is degenerate (below 1e-14).
EstimatorConfig a_opt(const MomentCurve& curve, const QuadratureRule& rule,
                      const GaussianPrior& prior);

double bmse(const MomentCurve& curve, const QuadratureRule& rule,
            const GaussianPrior& prior, double a);

// Conditional estimator statistics per phase value: mean = a <J_z>_phi,
// variance = a^2 (<J_z^2>_phi - <J_z>_phi^2), bias = mean - phi.
struct EstimatorCurves {
  std::vector<double> phi;
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> bias;
};

EstimatorCurves estimator_curves_from_moments(const MomentCurve& curve,
                                              double a);

}  // namespace twistopt::objective
