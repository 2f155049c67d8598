// SPDX-License-Identifier: MIT
#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "twistopt/runner.hpp"

namespace {

using twistopt::ConfigError;
using twistopt::format_double;
using twistopt::ParallelPolicy;
namespace circuits = twistopt::circuits;
namespace optimize = twistopt::optimize;
namespace runner = twistopt::runner;
namespace sim = twistopt::sim;

// Option values shared by every subcommand.
struct CommonOpts {
  int n_qubits = 30;
  double c1 = 0.0;
  double c2 = 0.0;
  double p = 0.0;
  int quad_nodes = 500;
  double eps = 1e-13;
  std::string init = "sequential";
  std::string engine = "collective";
  std::string decoding_path = "compiled";
  std::uint64_t seed = 0;
  std::string out = "results";
  std::string experiment;
  bool serial = false;
};

void add_common(CLI::App* sub, CommonOpts& o, int default_nodes,
                const std::string& default_engine) {
  o.quad_nodes = default_nodes;
  o.engine = default_engine;
  o.experiment = sub->get_name();
  sub->add_option("--n-qubits", o.n_qubits, "number of spins")
      ->capture_default_str();
  sub->add_option("--c1", o.c1, "local dephasing strength")
      ->capture_default_str();
  sub->add_option("--c2", o.c2, "nearest-neighbor dephasing correlation")
      ->capture_default_str();
  sub->add_option("--p", o.p, "per-twist dephasing probability")
      ->capture_default_str();
  sub->add_option("--quad-nodes", o.quad_nodes, "Gauss-Hermite order")
      ->capture_default_str();
  sub->add_option("--eps", o.eps,
                  "optimizer tolerance applied to all three stages")
      ->capture_default_str();
  sub->add_option("--init", o.init, "parameter initialization")
      ->check(CLI::IsMember({"zeros", "sequential"}))
      ->capture_default_str();
  sub->add_option("--engine", o.engine, "simulation backend")
      ->check(CLI::IsMember({"collective", "tensornet"}))
      ->capture_default_str();
  sub->add_option("--decoding-path", o.decoding_path,
                  "noisy-circuit contraction strategy")
      ->check(CLI::IsMember({"per-gate", "compiled"}))
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "seed recorded in the manifest")
      ->capture_default_str();
  sub->add_option("--out", o.out, "output directory")->capture_default_str();
  sub->add_option("--experiment", o.experiment,
                  "basename of the result files")
      ->capture_default_str();
  sub->add_flag("--serial", o.serial, "disable OpenMP parallelism");
}

sim::SimulationOptions sim_options(const CommonOpts& o) {
  sim::SimulationOptions so;
  so.engine = o.engine == "tensornet" ? sim::Engine::kTensornet
                                      : sim::Engine::kCollective;
  so.decoding_path = o.decoding_path == "per-gate"
                         ? sim::DecodingPath::kPerGate
                         : sim::DecodingPath::kCompiled;
  so.noise.c1 = o.c1;
  so.noise.c2 = o.c2;
  so.noise.p = o.p;
  so.policy = o.serial ? ParallelPolicy::kSerial : ParallelPolicy::kOpenMP;
  return so;
}

optimize::OptimizerConfig optimizer_config(const CommonOpts& o) {
  optimize::OptimizerConfig cfg;
  cfg.eps1 = cfg.eps2 = cfg.eps3 = o.eps;
  cfg.rng_seed = o.seed;
  return cfg;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ';';
    if constexpr (std::is_same_v<T, double>)
      out << format_double(values[i]);
    else
      out << values[i];
  }
  return out.str();
}

runner::ExperimentIo make_io(const CommonOpts& o) {
  runner::ExperimentIo io;
  io.out_dir = o.out;
  io.experiment = o.experiment;
  io.extra.emplace_back("c1", format_double(o.c1));
  io.extra.emplace_back("c2", format_double(o.c2));
  io.extra.emplace_back("p", format_double(o.p));
  io.extra.emplace_back("eps", format_double(o.eps));
  io.extra.emplace_back("init", o.init);
  io.extra.emplace_back("seed", std::to_string(o.seed));
  return io;
}

std::vector<circuits::AnsatzSpec> parse_specs(
    const std::vector<std::string>& labels) {
  std::vector<circuits::AnsatzSpec> specs;
  for (const std::string& text : labels)
    specs.push_back(circuits::parse_label(text));
  return specs;
}

std::vector<double> default_delta_grid(const std::string& grid) {
  std::vector<double> out;
  if (grid == "log16") {
    double lo = std::log(0.05), hi = std::log(1.2);
    for (int i = 0; i < 16; ++i) out.push_back(std::exp(lo + (hi - lo) * i / 15));
  } else {
    for (int i = 0; i < 9; ++i) out.push_back(0.5 + 0.05 * i);
  }
  return out;
}

int run_optimize(const CommonOpts& o, const std::vector<std::string>& labels,
                 std::vector<double> dphis, const std::string& grid) {
  if (dphis.empty()) dphis = default_delta_grid(grid);
  runner::OptimizeSweepConfig cfg;
  cfg.n_qubits = o.n_qubits;
  cfg.ansatzes = parse_specs(labels);
  cfg.delta_phis = dphis;
  cfg.quad_nodes = o.quad_nodes;
  cfg.sequential_init = o.init == "sequential";
  cfg.opt = optimizer_config(o);
  cfg.sim_opts = sim_options(o);
  runner::ExperimentIo io = make_io(o);
  io.extra.emplace_back("ansatzes", join(labels));
  io.extra.emplace_back("delta_phis", join(dphis));
  runner::run_optimize_sweep(cfg, io);
  std::cout << "wrote " << io.csv_path() << '\n';
  return 0;
}

int run_noise_grid(const CommonOpts& o, const std::string& label,
                   double delta_phi, const std::vector<double>& c1s,
                   const std::vector<double>& c2s) {
  runner::NoiseGridConfig cfg;
  cfg.n_qubits = o.n_qubits;
  cfg.ansatz = circuits::parse_label(label);
  cfg.delta_phi = delta_phi;
  cfg.quad_nodes = o.quad_nodes;
  for (double c1 : c1s) {
    if (c2s.empty()) {
      for (double f : {0.5, 0.0, -0.5}) cfg.cells.emplace_back(c1, f * c1);
    } else {
      for (double c2 : c2s) cfg.cells.emplace_back(c1, c2);
    }
  }
  if (cfg.cells.empty()) throw ConfigError("noise grid is empty; pass --c1");
  cfg.sim_opts = sim_options(o);
  runner::ExperimentIo io = make_io(o);
  io.extra.emplace_back("ansatz", label);
  io.extra.emplace_back("delta_phi", format_double(delta_phi));
  io.extra.emplace_back("c1_grid", join(c1s));
  io.extra.emplace_back("c2_grid", join(c2s));
  runner::run_noise_grid(cfg, io);
  std::cout << "wrote " << io.csv_path() << '\n';
  return 0;
}

int run_circuit_noise(const CommonOpts& o,
                      const std::vector<std::string>& labels,
                      double delta_phi, const std::vector<double>& ps) {
  runner::CircuitNoiseConfig cfg;
  cfg.n_qubits = o.n_qubits;
  cfg.ansatzes = parse_specs(labels);
  cfg.delta_phi = delta_phi;
  cfg.quad_nodes = o.quad_nodes;
  cfg.p_values = ps;
  if (cfg.p_values.empty())
    throw ConfigError("twist-noise sweep is empty; pass --p-grid");
  cfg.opt = optimizer_config(o);
  cfg.sim_opts = sim_options(o);
  runner::ExperimentIo io = make_io(o);
  io.extra.emplace_back("ansatzes", join(labels));
  io.extra.emplace_back("delta_phi", format_double(delta_phi));
  io.extra.emplace_back("p_grid", join(ps));
  runner::run_circuit_noise(cfg, io);
  std::cout << "wrote " << io.csv_path() << '\n';
  return 0;
}

int run_bias_variance(const CommonOpts& o, const std::string& label,
                      double delta_phi, int phi_points, double phi_span) {
  runner::BiasVarianceConfig cfg;
  cfg.n_qubits = o.n_qubits;
  cfg.ansatz = circuits::parse_label(label);
  cfg.delta_phi = delta_phi;
  cfg.quad_nodes = o.quad_nodes;
  cfg.phi_points = phi_points;
  cfg.phi_span = phi_span;
  cfg.sim_opts = sim_options(o);
  runner::ExperimentIo io = make_io(o);
  io.extra.emplace_back("ansatz", label);
  io.extra.emplace_back("delta_phi", format_double(delta_phi));
  io.extra.emplace_back("phi_points", std::to_string(phi_points));
  io.extra.emplace_back("phi_span", format_double(phi_span));
  runner::run_bias_variance(cfg, io);
  std::cout << "wrote " << io.csv_path() << '\n';
  return 0;
}

int run_hyper_study(const CommonOpts& o, const std::string& label,
                    double delta_phi, const std::vector<int>& nodes,
                    const std::vector<double>& eps_values,
                    const std::vector<std::string>& inits) {
  runner::HyperStudyConfig cfg;
  cfg.n_qubits = o.n_qubits;
  cfg.ansatz = circuits::parse_label(label);
  cfg.delta_phi = delta_phi;
  cfg.node_counts = nodes;
  cfg.eps_values = eps_values;
  for (const std::string& init : inits) {
    if (init != "zeros" && init != "sequential")
      throw ConfigError("unknown initialization '" + init + "'");
    cfg.sequential_inits.push_back(init == "sequential");
  }
  if (cfg.node_counts.empty() || cfg.eps_values.empty() ||
      cfg.sequential_inits.empty())
    throw ConfigError("hyperparameter grid has an empty axis");
  cfg.opt = optimizer_config(o);
  cfg.sim_opts = sim_options(o);
  runner::ExperimentIo io = make_io(o);
  io.extra.emplace_back("ansatz", label);
  io.extra.emplace_back("delta_phi", format_double(delta_phi));
  io.extra.emplace_back("node_grid", join(nodes));
  io.extra.emplace_back("eps_grid", join(eps_values));
  io.extra.emplace_back("init_grid", join(inits));
  runner::run_hyper_study(cfg, io);
  std::cout << "wrote " << io.csv_path() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Variational Bayesian phase estimation with collective rotations and "
      "one-axis twists"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "read option defaults from a TOML file; explicit flags win");
  app.set_version_flag("--version", std::string(twistopt::kVersion));

  CommonOpts opt_o, grid_o, cn_o, bv_o, hs_o;

  auto* opt_sub = app.add_subcommand(
      "optimize", "optimize protocols over a prior-width grid");
  add_common(opt_sub, opt_o, 500, "collective");
  std::vector<std::string> opt_ansatzes{"AAT_0_0", "AAT_1_0", "AAT_1_1",
                                        "AAT_1_2"};
  std::vector<double> opt_dphis;
  std::string opt_grid = "log16";
  opt_sub->add_option("--ansatz", opt_ansatzes, "ansatz labels, in run order")
      ->capture_default_str();
  opt_sub->add_option("--delta-phi", opt_dphis,
                      "explicit prior widths (overrides --grid)");
  opt_sub->add_option("--grid", opt_grid, "default prior-width grid")
      ->check(CLI::IsMember({"log16", "lin9"}))
      ->capture_default_str();

  auto* grid_sub = app.add_subcommand(
      "noise-grid",
      "evaluate saved parameters across correlated-dephasing cells");
  add_common(grid_sub, grid_o, 25, "tensornet");
  std::string grid_ansatz = "AAT_1_1";
  double grid_dphi = 0.74;
  std::vector<double> grid_c1s{0.05, 0.1, 0.2};
  std::vector<double> grid_c2s;
  grid_sub->add_option("--ansatz", grid_ansatz, "ansatz label")
      ->capture_default_str();
  grid_sub->add_option("--delta-phi", grid_dphi, "prior width")
      ->capture_default_str();
  grid_sub->add_option("--c1-grid", grid_c1s, "local strengths")
      ->capture_default_str();
  grid_sub->add_option(
      "--c2-grid", grid_c2s,
      "correlations; defaults to {+c1/2, 0, -c1/2} per strength");

  auto* cn_sub = app.add_subcommand(
      "circuit-noise", "re-optimize under twist dephasing across a p grid");
  add_common(cn_sub, cn_o, 25, "tensornet");
  std::vector<std::string> cn_ansatzes{"AAT_1_1", "AAT_1_2"};
  double cn_dphi = 0.74;
  std::vector<double> cn_ps{0.0005, 0.002, 0.006, 0.02, 0.05, 0.1};
  cn_sub->add_option("--ansatz", cn_ansatzes, "ansatz labels")
      ->capture_default_str();
  cn_sub->add_option("--delta-phi", cn_dphi, "prior width")
      ->capture_default_str();
  cn_sub->add_option("--p-grid", cn_ps, "twist dephasing strengths")
      ->capture_default_str();

  auto* bv_sub = app.add_subcommand(
      "bias-variance", "estimator mean/variance/bias across a phase grid");
  add_common(bv_sub, bv_o, 500, "collective");
  std::string bv_ansatz = "AAT_1_1";
  double bv_dphi = 0.74;
  int bv_points = 41;
  double bv_span = 3.0;
  bv_sub->add_option("--ansatz", bv_ansatz, "ansatz label")
      ->capture_default_str();
  bv_sub->add_option("--delta-phi", bv_dphi, "prior width")
      ->capture_default_str();
  bv_sub->add_option("--phi-points", bv_points, "grid size")
      ->capture_default_str();
  bv_sub->add_option("--phi-span", bv_span,
                     "half-width in units of the prior width")
      ->capture_default_str();

  auto* hs_sub = app.add_subcommand(
      "hyper-study", "optimizer hyperparameter sensitivity grid");
  add_common(hs_sub, hs_o, 500, "collective");
  hs_o.n_qubits = 8;
  hs_sub->get_option("--n-qubits")->default_val(8);
  std::string hs_ansatz = "AAT_1_3";
  double hs_dphi = 0.74;
  std::vector<int> hs_nodes{25, 100, 500};
  std::vector<double> hs_eps{1e-8, 1e-13};
  std::vector<std::string> hs_inits{"zeros", "sequential"};
  hs_sub->add_option("--ansatz", hs_ansatz, "ansatz label")
      ->capture_default_str();
  hs_sub->add_option("--delta-phi", hs_dphi, "prior width")
      ->capture_default_str();
  hs_sub->add_option("--node-grid", hs_nodes, "quadrature orders")
      ->capture_default_str();
  hs_sub->add_option("--eps-grid", hs_eps, "stage tolerances")
      ->capture_default_str();
  hs_sub->add_option("--init-grid", hs_inits, "initialization modes")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (opt_sub->parsed())
      return run_optimize(opt_o, opt_ansatzes, opt_dphis, opt_grid);
    if (grid_sub->parsed())
      return run_noise_grid(grid_o, grid_ansatz, grid_dphi, grid_c1s,
                            grid_c2s);
    if (cn_sub->parsed())
      return run_circuit_noise(cn_o, cn_ansatzes, cn_dphi, cn_ps);
    if (bv_sub->parsed())
      return run_bias_variance(bv_o, bv_ansatz, bv_dphi, bv_points, bv_span);
    if (hs_sub->parsed())
      return run_hyper_study(hs_o, hs_ansatz, hs_dphi, hs_nodes, hs_eps,
                             hs_inits);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
