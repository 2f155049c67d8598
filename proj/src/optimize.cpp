// SPDX-License-Identifier: MIT
#include "twistopt/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace twistopt::optimize {

namespace {

double checked_eval(const ObjectiveFn& f, const std::vector<double>& x,
                    long& evals) {
  double v = f(x);
  ++evals;
  if (!std::isfinite(v))
    throw std::runtime_error("objective returned a non-finite value");
  return v;
}

}  // namespace

std::vector<double> fd_gradient(const ObjectiveFn& f,
                                const std::vector<double>& x, double step) {
  std::vector<double> g(x.size());
  std::vector<double> probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    double fp = f(probe);
    probe[i] = x[i] - step;
    double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

OptimizationResult nelder_mead(const ObjectiveFn& f,
                               const std::vector<double>& x0,
                               const OptimizerConfig& cfg) {
  const std::size_t n = x0.size();
  if (n == 0) throw ConfigError("cannot optimize over zero parameters");
  long evals = 0;

  // Vertices kept sorted by value, best first. Ties keep insertion order so
  // runs are reproducible.
  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (std::size_t i = 1; i <= n; ++i) xs[i][i - 1] += cfg.simplex_step;
  for (std::size_t i = 0; i <= n; ++i) fs[i] = checked_eval(f, xs[i], evals);

  auto order = [&]() {
    std::vector<std::size_t> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> xs2(n + 1);
    std::vector<double> fs2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      xs2[i] = std::move(xs[idx[i]]);
      fs2[i] = fs[idx[i]];
    }
    xs = std::move(xs2);
    fs = std::move(fs2);
  };
  order();

  OptimizationResult res;
  StageRecord rec;
  rec.stage = "nelder-mead";
  rec.terminal = "max-iters";

  int iter = 0;
  for (; iter < cfg.nm_max_iters; ++iter) {
    if (fs[n] - fs[0] <= cfg.eps1) {
      rec.terminal = "converged";
      break;
    }
    // Centroid of all but the worst vertex.
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < n; ++d) centroid[d] += xs[i][d];
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d)
        p[d] = centroid[d] + t * (xs[n][d] - centroid[d]);
      return p;
    };

    std::vector<double> refl = blend(-1.0);
    double f_refl = checked_eval(f, refl, evals);
    if (f_refl < fs[0]) {
      std::vector<double> expd = blend(-2.0);
      double f_expd = checked_eval(f, expd, evals);
      if (f_expd < f_refl) {
        xs[n] = std::move(expd);
        fs[n] = f_expd;
      } else {
        xs[n] = std::move(refl);
        fs[n] = f_refl;
      }
    } else if (f_refl < fs[n - 1]) {
      xs[n] = std::move(refl);
      fs[n] = f_refl;
    } else {
      bool outside = f_refl < fs[n];
      std::vector<double> ctr = blend(outside ? -0.5 : 0.5);
      double f_ctr = checked_eval(f, ctr, evals);
      if (f_ctr < std::min(f_refl, fs[n])) {
        xs[n] = std::move(ctr);
        fs[n] = f_ctr;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t d = 0; d < n; ++d)
            xs[i][d] = xs[0][d] + 0.5 * (xs[i][d] - xs[0][d]);
          fs[i] = checked_eval(f, xs[i], evals);
        }
      }
    }
    order();
  }

  rec.iterations = iter;
  rec.evaluations = evals;
  rec.best_value = fs[0];
  res.x = xs[0];
  res.value = fs[0];
  res.converged = rec.terminal == "converged";
  res.stages.push_back(std::move(rec));
  res.history = {res.value};
  return res;
}

OptimizationResult quadratic_refine(const ObjectiveFn& f,
                                    const GradientFn& grad,
                                    const std::vector<double>& x0,
                                    const OptimizerConfig& cfg) {
  const std::size_t n = x0.size();
  if (n == 0) throw ConfigError("cannot optimize over zero parameters");
  long evals = 0;

  std::vector<double> x = x0;
  double fx = checked_eval(f, x, evals);

  OptimizationResult res;
  StageRecord rec;
  rec.stage = "newton";
  rec.terminal = "max-iters";

  int iter = 0;
  for (; iter < cfg.newton_max_iters; ++iter) {
    std::vector<double> g = grad(x);
    Eigen::VectorXd ge(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) ge(static_cast<Eigen::Index>(i)) = g[i];
    if (ge.lpNorm<Eigen::Infinity>() <= 1e-14) {
      rec.terminal = "converged";
      break;
    }

    // Finite-difference Hessian of the local quadratic model.
    double h = cfg.hess_step;
    Eigen::MatrixXd H(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < n; ++i) {
      probe[i] = x[i] + h;
      double fpp = checked_eval(f, probe, evals);
      probe[i] = x[i] - h;
      double fmm = checked_eval(f, probe, evals);
      probe[i] = x[i];
      H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
          (fpp - 2.0 * fx + fmm) / (h * h);
      for (std::size_t j = i + 1; j < n; ++j) {
        probe[i] = x[i] + h;
        probe[j] = x[j] + h;
        double fpp2 = checked_eval(f, probe, evals);
        probe[j] = x[j] - h;
        double fpm = checked_eval(f, probe, evals);
        probe[i] = x[i] - h;
        probe[j] = x[j] + h;
        double fmp = checked_eval(f, probe, evals);
        probe[j] = x[j] - h;
        double fmm2 = checked_eval(f, probe, evals);
        probe[i] = x[i];
        probe[j] = x[j];
        double hij = (fpp2 - fpm - fmp + fmm2) / (4.0 * h * h);
        H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hij;
        H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = hij;
      }
    }

    // Newton direction; regularize toward steepest descent if the model is
    // indefinite or the solve is unusable.
    Eigen::VectorXd d;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    bool usable = ldlt.info() == Eigen::Success && ldlt.isPositive();
    if (usable) {
      d = -ldlt.solve(ge);
      if (!d.allFinite() || d.dot(ge) >= 0.0) usable = false;
    }
    if (!usable) d = -ge;

    double slope = d.dot(ge);
    if (slope >= 0.0 || !std::isfinite(slope)) {
      rec.terminal = "no-progress";
      break;
    }

    // Backtracking Armijo line search.
    double t = 1.0;
    double f_new = fx;
    std::vector<double> x_new = x;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i)
        x_new[i] = x[i] + t * d(static_cast<Eigen::Index>(i));
      f_new = checked_eval(f, x_new, evals);
      if (f_new <= fx + 1e-4 * t * slope) {
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      rec.terminal = "no-progress";
      break;
    }

    double gap = fx - f_new;
    x = x_new;
    fx = f_new;
    if (gap <= cfg.eps2) {
      ++iter;
      rec.terminal = "converged";
      break;
    }
  }

  rec.iterations = iter;
  rec.evaluations = evals;
  rec.best_value = fx;
  res.x = std::move(x);
  res.value = fx;
  res.converged = rec.terminal == "converged";
  res.stages.push_back(std::move(rec));
  res.history = {res.value};
  return res;
}

OptimizationResult quadratic_refine(const ObjectiveFn& f,
                                    const std::vector<double>& x0,
                                    const OptimizerConfig& cfg) {
  GradientFn grad = [&f, step = cfg.grad_step](const std::vector<double>& x) {
    return fd_gradient(f, x, step);
  };
  return quadratic_refine(f, grad, x0, cfg);
}

OptimizationResult alternate(const ObjectiveFn& f,
                             const std::vector<double>& x0,
                             const OptimizerConfig& cfg) {
  OptimizationResult res;
  res.x = x0;
  long seed_evals = 0;
  res.value = checked_eval(f, res.x, seed_evals);
  res.history = {res.value};

  bool run_nm = true;
  for (int stage = 0; stage < 2 * cfg.max_rounds; ++stage) {
    OptimizationResult part =
        run_nm ? nelder_mead(f, res.x, cfg) : quadratic_refine(f, res.x, cfg);
    run_nm = !run_nm;

    // Stages never regress: keep the incumbent when a stage fails to improve.
    if (part.value <= res.value) {
      res.x = std::move(part.x);
      res.value = part.value;
    }
    res.stages.push_back(std::move(part.stages.front()));
    res.stages.back().best_value = res.value;
    double prev = res.history.back();
    res.history.push_back(res.value);
    if (std::abs(prev - res.value) <= cfg.eps3) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace twistopt::optimize
