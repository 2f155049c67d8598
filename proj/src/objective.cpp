// SPDX-License-Identifier: MIT
#include "twistopt/objective.hpp"

#include <cmath>
#include <numbers>

namespace twistopt::objective {

std::vector<double> phi_nodes(const GaussianPrior& prior,
                              const QuadratureRule& rule) {
  std::vector<double> phi(static_cast<std::size_t>(rule.order()));
  double scale = std::numbers::sqrt2 * prior.delta_phi;
  for (int i = 0; i < rule.order(); ++i)
    phi[static_cast<std::size_t>(i)] = scale * rule.nodes(i);
  return phi;
}

BmseBreakdown accumulate_bmse(const MomentCurve& curve,
                              const QuadratureRule& rule,
                              const GaussianPrior& prior) {
  if (curve.size() != static_cast<std::size_t>(rule.order()))
    throw ConfigError("moment curve and quadrature rule sizes differ");
  BmseBreakdown acc;
  acc.delta_phi = prior.delta_phi;
  double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double w = rule.weights(static_cast<Eigen::Index>(i)) * inv_sqrt_pi;
    acc.avg_phi_jz += w * curve.phi[i] * curve.jz[i];
    acc.avg_jz2 += w * curve.jz2[i];
  }
  return acc;
}

EstimatorConfig a_opt(const MomentCurve& curve, const QuadratureRule& rule,
                      const GaussianPrior& prior) {
  BmseBreakdown acc = accumulate_bmse(curve, rule, prior);
  if (acc.avg_jz2 < 1e-14)
    throw ConfigError("averaged <Jz^2> is degenerate; estimator undefined");
  return EstimatorConfig{acc.avg_phi_jz / acc.avg_jz2};
}

double bmse(const MomentCurve& curve, const QuadratureRule& rule,
            const GaussianPrior& prior, double a) {
  return accumulate_bmse(curve, rule, prior).bmse(a);
}

EstimatorCurves estimator_curves_from_moments(const MomentCurve& curve,
                                              double a) {
  EstimatorCurves out;
  out.phi = curve.phi;
  out.mean.resize(curve.size());
  out.variance.resize(curve.size());
  out.bias.resize(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double mean = a * curve.jz[i];
    out.mean[i] = mean;
    out.variance[i] = a * a * (curve.jz2[i] - curve.jz[i] * curve.jz[i]);
    out.bias[i] = mean - curve.phi[i];
  }
  return out;
}

}  // namespace twistopt::objective
