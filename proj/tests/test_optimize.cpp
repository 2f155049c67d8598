// SPDX-License-Identifier: MIT
#include "twistopt/optimize.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "twistopt/objective.hpp"
#include "twistopt/sim.hpp"

using namespace twistopt;
namespace testing = twistopt::testing;

namespace {

double sphere(const std::vector<double>& x) {
  double v = 0.0;
  for (double c : x) v += c * c;
  return v;
}

double rosenbrock(const std::vector<double>& x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

optimize::ObjectiveFn protocol_objective(const circuits::ProtocolCircuits& pc,
                                         int n, double delta_phi,
                                         int nodes) {
  sim::SimulationOptions opts;
  return sim::make_bmse_objective(pc, n, objective::GaussianPrior{delta_phi},
                                  objective::gauss_hermite(nodes), opts);
}

}  // namespace

TEST_CASE("nelder mead finds the quadratic minimum") {
  optimize::OptimizerConfig cfg;
  auto r = optimize::nelder_mead(sphere, {1.0, 1.0}, cfg);
  CHECK(r.converged);
  CHECK(std::abs(r.x[0]) < 1e-6);
  CHECK(std::abs(r.x[1]) < 1e-6);
  CHECK(r.value < 1e-12);
}

TEST_CASE("nelder mead crosses the rosenbrock valley") {
  optimize::OptimizerConfig cfg;
  auto r = optimize::nelder_mead(rosenbrock, {-1.2, 1.0}, cfg);
  CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
  CHECK(std::abs(r.x[1] - 1.0) < 1e-4);
}

TEST_CASE("nelder mead terminates immediately on constant objectives") {
  optimize::OptimizerConfig cfg;
  auto r = optimize::nelder_mead([](const std::vector<double>&) { return 3.0; },
                                 {0.5, -0.5, 0.1}, cfg);
  CHECK(r.converged);
  CHECK(r.value == 3.0);
  REQUIRE(!r.stages.empty());
  CHECK(r.stages.front().iterations <= 1);
}

TEST_CASE("non finite objective aborts with a diagnostic") {
  optimize::OptimizerConfig cfg;
  auto bad = [](const std::vector<double>& x) {
    return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : x[0];
  };
  CHECK_THROWS_AS(optimize::nelder_mead(bad, {0.4}, cfg), std::runtime_error);
}

TEST_CASE("quadratic refine solves quadratics in two iterations") {
  optimize::OptimizerConfig cfg;
  auto f = [](const std::vector<double>& x) {
    const double a = x[0] - 0.3, b = x[1] + 1.1;
    return 2.0 * a * a + 0.5 * b * b + a * b + 4.0;
  };
  auto r = optimize::quadratic_refine(f, {1.0, 1.0}, cfg);
  REQUIRE(!r.stages.empty());
  CHECK(r.stages.front().iterations <= 2);
  // Minimum of the quadratic: solve [4 1; 1 1] d = 0 offsets.
  const double det = 4.0 * 1.0 - 1.0;
  const double x0 = 0.3, x1 = -1.1;
  (void)det;
  CHECK(std::abs(r.x[0] - x0) < 1e-8);
  CHECK(std::abs(r.x[1] - x1) < 1e-8);
}

TEST_CASE("quadratic refine stays put at a minimum") {
  optimize::OptimizerConfig cfg;
  auto r = optimize::quadratic_refine(sphere, {0.0, 0.0}, cfg);
  CHECK(r.converged);
  CHECK(r.x[0] == 0.0);
  CHECK(r.x[1] == 0.0);
}

TEST_CASE("finite difference gradient matches a five point stencil") {
  const int n = 6;
  auto pc = circuits::build_aat(1, 1);
  std::mt19937_64 rng(63);
  auto x = testing::random_params(rng, pc.n_params, 0.6);
  auto f = protocol_objective(pc, n, 0.74, 30);

  auto g = optimize::fd_gradient(f, x, 1e-6);
  for (std::size_t k = 0; k < x.size(); k += 3) {
    const double h = 1e-3;
    auto at = [&](double offset) {
      auto y = x;
      y[k] += offset;
      return f(y);
    };
    const double five =
        (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    const double scale = std::max(1e-6, std::abs(five));
    CHECK(std::abs(g[k] - five) / scale < 1e-5);
  }
}

TEST_CASE("alternation history is monotone and converges") {
  optimize::OptimizerConfig cfg;
  auto r = optimize::alternate(rosenbrock, {-1.2, 1.0}, cfg);
  CHECK(r.converged);
  REQUIRE(r.history.size() >= 2);
  for (std::size_t i = 1; i < r.history.size(); ++i)
    CHECK(r.history[i] <= r.history[i - 1] + 1e-15);
  CHECK(r.value <= rosenbrock({-1.2, 1.0}));
  CHECK(std::abs(r.x[0] - 1.0) < 1e-6);
}

TEST_CASE("alternation at an optimum agrees immediately") {
  optimize::OptimizerConfig cfg;
  auto r = optimize::alternate(sphere, {0.0, 0.0}, cfg);
  CHECK(r.converged);
  CHECK(r.value == 0.0);
}

TEST_CASE("optimized twist protocol beats the twist free baseline") {
  const int n = 4;
  const double dphi = 0.7;
  optimize::OptimizerConfig cfg;
  cfg.eps1 = cfg.eps2 = cfg.eps3 = 1e-10;

  auto classical = circuits::build_aat(0, 0);
  auto rc = optimize::alternate(
      protocol_objective(classical, n, dphi, 60),
      std::vector<double>(static_cast<std::size_t>(classical.n_params), 0.0),
      cfg);
  CHECK(rc.value < 1.0);

  auto aat = circuits::build_aat(1, 1);
  auto ra = optimize::alternate(
      protocol_objective(aat, n, dphi, 60),
      std::vector<double>(static_cast<std::size_t>(aat.n_params), 0.0), cfg);
  CHECK(ra.value < rc.value);
}

TEST_CASE("sequential chain is monotone in decoding depth") {
  const int n = 4;
  const double dphi = 0.74;
  optimize::OptimizerConfig cfg;
  cfg.eps1 = cfg.eps2 = cfg.eps3 = 1e-10;

  std::vector<double> values;
  std::vector<double> prev_params;
  circuits::AnsatzSpec prev_spec;
  for (int depth = 1; depth <= 3; ++depth) {
    circuits::AnsatzSpec spec{circuits::Family::kAAT, 1, depth};
    auto pc = circuits::build(spec);
    std::vector<double> x0(static_cast<std::size_t>(pc.n_params), 0.0);
    if (!values.empty())
      x0 = circuits::sequential_init(prev_spec, prev_params, spec);
    auto r = optimize::alternate(protocol_objective(pc, n, dphi, 60), x0, cfg);
    if (!values.empty()) CHECK(r.value <= values.back() + 1e-12);
    values.push_back(r.value);
    prev_params = r.x;
    prev_spec = spec;
  }
}

TEST_CASE("warm started deeper objective starts at the shallow optimum") {
  const int n = 4;
  auto shallow = circuits::build_aat(1, 1);
  optimize::OptimizerConfig cfg;
  cfg.eps1 = cfg.eps2 = cfg.eps3 = 1e-9;
  auto rs = optimize::alternate(
      protocol_objective(shallow, n, 0.7, 40),
      std::vector<double>(static_cast<std::size_t>(shallow.n_params), 0.0),
      cfg);
  auto deep = circuits::build_aat(1, 2);
  auto x0 = circuits::sequential_init(shallow.spec, rs.x, deep.spec);
  const double f0 = protocol_objective(deep, n, 0.7, 40)(x0);
  CHECK(f0 == doctest::Approx(rs.value).epsilon(1e-12));
}

TEST_CASE("identical configuration reproduces the trajectory bitwise") {
  const int n = 4;
  auto pc = circuits::build_aat(1, 1);
  optimize::OptimizerConfig cfg;
  cfg.eps1 = cfg.eps2 = cfg.eps3 = 1e-8;
  auto f = protocol_objective(pc, n, 0.6, 30);
  std::vector<double> x0(static_cast<std::size_t>(pc.n_params), 0.0);
  auto a = optimize::alternate(f, x0, cfg);
  auto b = optimize::alternate(f, x0, cfg);
  REQUIRE(a.x.size() == b.x.size());
  for (std::size_t i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]);
  CHECK(a.value == b.value);
  CHECK(a.history == b.history);
}

TEST_CASE("stage records carry termination reasons") {
  optimize::OptimizerConfig cfg;
  cfg.nm_max_iters = 3;
  auto r = optimize::nelder_mead(rosenbrock, {-1.2, 1.0}, cfg);
  CHECK(!r.converged);
  REQUIRE(!r.stages.empty());
  CHECK(r.stages.front().terminal == "max-iters");
  CHECK(r.stages.front().stage == "nelder-mead");
}
