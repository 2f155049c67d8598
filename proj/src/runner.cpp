// SPDX-License-Identifier: MIT
#include "twistopt/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "twistopt/objective.hpp"

namespace twistopt::runner {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Tables report the root error over the prior width; the optimizer works on
// its square.
double table_ratio(double objective_value) {
  return std::sqrt(objective_value);
}

std::vector<std::pair<std::string, std::string>> base_manifest(
    const ExperimentIo& io, int n_qubits, int quad_nodes,
    const sim::SimulationOptions& opts) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("experiment", io.experiment);
  kv.emplace_back("n_qubits", std::to_string(n_qubits));
  kv.emplace_back("quad_nodes", std::to_string(quad_nodes));
  kv.emplace_back("engine", opts.engine == sim::Engine::kCollective
                                ? "collective"
                                : "tensornet");
  kv.emplace_back("decoding_path",
                  opts.decoding_path == sim::DecodingPath::kCompiled
                      ? "compiled"
                      : "per-gate");
  kv.emplace_back("policy", opts.policy == ParallelPolicy::kOpenMP
                                ? "openmp"
                                : "serial");
  kv.emplace_back("version", kVersion);
  kv.insert(kv.end(), io.extra.begin(), io.extra.end());
  return kv;
}

}  // namespace

OptimizedProtocol optimize_protocol(const circuits::AnsatzSpec& spec,
                                    int n_qubits, double delta_phi,
                                    int quad_nodes,
                                    const optimize::OptimizerConfig& cfg,
                                    const sim::SimulationOptions& opts,
                                    const std::vector<double>& init) {
  circuits::ProtocolCircuits pc = circuits::build(spec);
  objective::GaussianPrior prior{delta_phi};
  objective::QuadratureRule rule = objective::gauss_hermite(quad_nodes);
  optimize::ObjectiveFn f =
      sim::make_bmse_objective(pc, n_qubits, prior, rule, opts);
  std::vector<double> x0 =
      init.empty() ? std::vector<double>(static_cast<std::size_t>(pc.n_params),
                                         0.0)
                   : init;
  if (static_cast<int>(x0.size()) != pc.n_params)
    throw ConfigError("warm-start length does not match the circuit");
  optimize::OptimizationResult r = optimize::alternate(f, x0, cfg);
  OptimizedProtocol out;
  out.spec = spec;
  out.params = r.x;
  out.ratio = r.value;
  out.stages = static_cast<int>(r.stages.size());
  out.converged = r.converged;
  out.a = sim::evaluate_protocol(pc, r.x, n_qubits, prior, rule, opts).a;
  return out;
}

std::vector<OptimizedProtocol> optimize_chain(
    const std::vector<circuits::AnsatzSpec>& specs, int n_qubits,
    double delta_phi, int quad_nodes, const optimize::OptimizerConfig& cfg,
    const sim::SimulationOptions& opts, bool sequential_init) {
  std::vector<OptimizedProtocol> done;
  for (const circuits::AnsatzSpec& spec : specs) {
    std::vector<double> init;
    if (sequential_init) {
      std::vector<circuits::AnsatzSpec> available;
      for (const auto& d : done) available.push_back(d.spec);
      if (auto shallow = circuits::deepest_warm_start(spec, available)) {
        for (const auto& d : done)
          if (d.spec == *shallow) {
            init = circuits::sequential_init(*shallow, d.params, spec);
            break;
          }
      }
    }
    done.push_back(optimize_protocol(spec, n_qubits, delta_phi, quad_nodes,
                                     cfg, opts, init));
  }
  return done;
}

void run_optimize_sweep(const OptimizeSweepConfig& cfg,
                        const ExperimentIo& io) {
  if (cfg.ansatzes.empty()) throw ConfigError("empty ansatz list");
  if (cfg.delta_phis.empty()) throw ConfigError("empty delta-phi grid");
  results::CsvWriter csv(io.csv_path());
  auto manifest = base_manifest(io, cfg.n_qubits, cfg.quad_nodes,
                                cfg.sim_opts);
  manifest.emplace_back("sequential_init",
                        cfg.sequential_init ? "1" : "0");
  manifest.emplace_back("delta_phi_count",
                        std::to_string(cfg.delta_phis.size()));
  results::write_manifest(io.manifest_path(), manifest);

  for (double dphi : cfg.delta_phis) {
    std::vector<OptimizedProtocol> done;
    for (const circuits::AnsatzSpec& spec : cfg.ansatzes) {
      std::string label = circuits::label(spec);
      results::ResultRow row;
      row.experiment = io.experiment;
      row.ansatz = label;
      row.n = cfg.n_qubits;
      row.delta_phi = dphi;
      if (csv.has(row)) {
        if (auto saved =
                results::load_params(io.params_dir(), label, dphi)) {
          OptimizedProtocol prev;
          prev.spec = spec;
          prev.params = *saved;
          done.push_back(std::move(prev));
          continue;
        }
      }
      std::vector<double> init;
      if (cfg.sequential_init) {
        std::vector<circuits::AnsatzSpec> available;
        for (const auto& d : done) available.push_back(d.spec);
        if (auto shallow = circuits::deepest_warm_start(spec, available))
          for (const auto& d : done)
            if (d.spec == *shallow) {
              init = circuits::sequential_init(*shallow, d.params, spec);
              break;
            }
      }
      Stopwatch timer;
      OptimizedProtocol r = optimize_protocol(
          spec, cfg.n_qubits, dphi, cfg.quad_nodes, cfg.opt, cfg.sim_opts,
          init);
      results::append_wall_time(io.times_path(),
                                label + "_dphi" + format_double(dphi),
                                timer.seconds());
      results::save_params(io.params_dir(), label, dphi, r.params);
      row.a_opt = r.a;
      row.bmse_ratio = table_ratio(r.ratio);
      row.stages = r.stages;
      row.status = r.converged ? "ok" : "max-rounds";
      if (!csv.has(row)) csv.append(row);
      done.push_back(std::move(r));
    }
  }
}

void run_noise_grid(const NoiseGridConfig& cfg, const ExperimentIo& io) {
  if (cfg.cells.empty()) throw ConfigError("empty noise grid");
  std::string label = circuits::label(cfg.ansatz);
  auto saved = results::load_params(io.params_dir(), label, cfg.delta_phi);
  if (!saved)
    throw ConfigError("no saved parameters for " + label +
                      "; run the optimizer first");
  circuits::ProtocolCircuits pc = circuits::build(cfg.ansatz);
  objective::GaussianPrior prior{cfg.delta_phi};
  objective::QuadratureRule rule = objective::gauss_hermite(cfg.quad_nodes);

  results::CsvWriter csv(io.csv_path());
  results::write_manifest(
      io.manifest_path(),
      base_manifest(io, cfg.n_qubits, cfg.quad_nodes, cfg.sim_opts));

  for (const auto& [c1, c2] : cfg.cells) {
    results::ResultRow row;
    row.experiment = io.experiment;
    row.ansatz = label;
    row.n = cfg.n_qubits;
    row.delta_phi = cfg.delta_phi;
    row.c1 = c1;
    row.c2 = c2;
    row.p = cfg.sim_opts.noise.p;
    if (csv.has(row)) continue;
    sim::SimulationOptions opts = cfg.sim_opts;
    opts.noise.c1 = c1;
    opts.noise.c2 = c2;
    Stopwatch timer;
    try {
      noisemodel::validate(opts.noise, cfg.n_qubits);
    } catch (const ConfigError&) {
      row.status = "skipped-non-psd";
      csv.append(row);
      continue;
    }
    sim::ProtocolEvaluation ev = sim::evaluate_protocol(
        pc, *saved, cfg.n_qubits, prior, rule, opts);
    results::append_wall_time(io.times_path(),
                              label + "_c1" + format_double(c1) + "_c2" +
                                  format_double(c2),
                              timer.seconds());
    row.a_opt = ev.a;
    row.bmse_ratio = table_ratio(ev.ratio);
    row.status = "ok";
    csv.append(row);
  }
}

void run_circuit_noise(const CircuitNoiseConfig& cfg, const ExperimentIo& io) {
  if (cfg.ansatzes.empty()) throw ConfigError("empty ansatz list");
  if (cfg.p_values.empty()) throw ConfigError("empty noise-strength grid");
  results::CsvWriter csv(io.csv_path());
  results::write_manifest(
      io.manifest_path(),
      base_manifest(io, cfg.n_qubits, cfg.quad_nodes, cfg.sim_opts));

  for (const circuits::AnsatzSpec& spec : cfg.ansatzes) {
    std::string label = circuits::label(spec);
    auto base = results::load_params(io.params_dir(), label, cfg.delta_phi);
    if (!base)
      throw ConfigError("no saved parameters for " + label +
                        "; run the optimizer first");
    std::vector<double> warm = *base;
    for (double p : cfg.p_values) {
      results::ResultRow row;
      row.experiment = io.experiment;
      row.ansatz = label;
      row.n = cfg.n_qubits;
      row.delta_phi = cfg.delta_phi;
      row.c1 = cfg.sim_opts.noise.c1;
      row.c2 = cfg.sim_opts.noise.c2;
      row.p = p;
      std::string p_label = label + "_p" + format_double(p);
      if (csv.has(row)) {
        if (auto saved = results::load_params(io.params_dir(), p_label,
                                              cfg.delta_phi)) {
          warm = *saved;
          continue;
        }
      }
      sim::SimulationOptions opts = cfg.sim_opts;
      opts.noise.p = p;
      Stopwatch timer;
      OptimizedProtocol r =
          optimize_protocol(spec, cfg.n_qubits, cfg.delta_phi,
                            cfg.quad_nodes, cfg.opt, opts, warm);
      results::append_wall_time(io.times_path(), p_label, timer.seconds());
      results::save_params(io.params_dir(), p_label, cfg.delta_phi, r.params);
      row.a_opt = r.a;
      row.bmse_ratio = table_ratio(r.ratio);
      row.stages = r.stages;
      row.status = r.converged ? "ok" : "max-rounds";
      if (!csv.has(row)) csv.append(row);
      warm = r.params;
    }
  }
}

void run_bias_variance(const BiasVarianceConfig& cfg, const ExperimentIo& io) {
  if (cfg.phi_points < 1) throw ConfigError("empty phase grid");
  std::string label = circuits::label(cfg.ansatz);
  auto saved = results::load_params(io.params_dir(), label, cfg.delta_phi);
  if (!saved)
    throw ConfigError("no saved parameters for " + label +
                      "; run the optimizer first");
  circuits::ProtocolCircuits pc = circuits::build(cfg.ansatz);
  objective::GaussianPrior prior{cfg.delta_phi};
  objective::QuadratureRule rule = objective::gauss_hermite(cfg.quad_nodes);

  Stopwatch timer;
  sim::ProtocolEvaluation ev = sim::evaluate_protocol(
      pc, *saved, cfg.n_qubits, prior, rule, cfg.sim_opts);

  std::vector<double> phi(static_cast<std::size_t>(cfg.phi_points));
  double span = cfg.phi_span * cfg.delta_phi;
  for (int i = 0; i < cfg.phi_points; ++i)
    phi[static_cast<std::size_t>(i)] =
        cfg.phi_points == 1
            ? 0.0
            : -span + 2.0 * span * i / (cfg.phi_points - 1);
  objective::EstimatorCurves curves = sim::estimator_curves(
      pc, *saved, cfg.n_qubits, phi, ev.a, cfg.sim_opts);

  std::string curve_path = io.out_dir + "/" + io.experiment + "_curves.csv";
  {
    std::ofstream out(curve_path, std::ios::trunc);
    out << "phi,mean,variance,bias\n";
    for (std::size_t i = 0; i < curves.phi.size(); ++i)
      out << format_double(curves.phi[i]) << ','
          << format_double(curves.mean[i]) << ','
          << format_double(curves.variance[i]) << ','
          << format_double(curves.bias[i]) << '\n';
  }
  results::append_wall_time(io.times_path(), label, timer.seconds());

  results::CsvWriter csv(io.csv_path());
  results::write_manifest(
      io.manifest_path(),
      base_manifest(io, cfg.n_qubits, cfg.quad_nodes, cfg.sim_opts));
  results::ResultRow row;
  row.experiment = io.experiment;
  row.ansatz = label;
  row.n = cfg.n_qubits;
  row.delta_phi = cfg.delta_phi;
  row.c1 = cfg.sim_opts.noise.c1;
  row.c2 = cfg.sim_opts.noise.c2;
  row.p = cfg.sim_opts.noise.p;
  row.a_opt = ev.a;
  row.bmse_ratio = table_ratio(ev.ratio);
  row.status = "ok";
  if (!csv.has(row)) csv.append(row);
}

void run_hyper_study(const HyperStudyConfig& cfg, const ExperimentIo& io) {
  if (cfg.node_counts.empty()) throw ConfigError("empty quadrature grid");
  if (cfg.eps_values.empty()) throw ConfigError("empty tolerance grid");
  if (cfg.sequential_inits.empty())
    throw ConfigError("empty initialization grid");
  results::CsvWriter csv(io.csv_path());
  results::write_manifest(
      io.manifest_path(),
      base_manifest(io, cfg.n_qubits, 0, cfg.sim_opts));
  std::string label = circuits::label(cfg.ansatz);

  // Cells whose optimum exceeds the study's best by more than this margin
  // are marked as stuck in a local minimum. Flagging needs the whole table,
  // so new rows are appended after the last cell finishes.
  constexpr double kLocalMinimumMargin = 1e-3;
  std::vector<results::ResultRow> fresh;
  std::vector<double> values;

  for (bool seq : cfg.sequential_inits)
    for (double eps : cfg.eps_values)
      for (int nodes : cfg.node_counts) {
        std::string cell = io.experiment + ";init=" +
                           (seq ? "sequential" : "zeros") +
                           ";eps=" + format_double(eps) +
                           ";nodes=" + std::to_string(nodes);
        results::ResultRow row;
        row.experiment = cell;
        row.ansatz = label;
        row.n = cfg.n_qubits;
        row.delta_phi = cfg.delta_phi;
        if (auto prev = csv.find(row)) {
          values.push_back(prev->bmse_ratio);
          continue;
        }
        optimize::OptimizerConfig opt = cfg.opt;
        opt.eps1 = opt.eps2 = opt.eps3 = eps;
        Stopwatch timer;
        OptimizedProtocol r;
        if (seq) {
          // Chain through every strictly shallower same-family spec.
          std::vector<circuits::AnsatzSpec> chain;
          for (int e = 0; e <= cfg.ansatz.n_enc_twists; ++e)
            for (int d = 0; d <= cfg.ansatz.n_dec_twists; ++d) {
              circuits::AnsatzSpec s{cfg.ansatz.family, e, d};
              if (cfg.ansatz.family == circuits::Family::kPAR &&
                  (e % 2 != 0 || d % 2 != 0 || e == 0 || d == 0))
                continue;
              chain.push_back(s);
            }
          r = optimize_chain(chain, cfg.n_qubits, cfg.delta_phi, nodes, opt,
                             cfg.sim_opts, true)
                  .back();
        } else {
          r = optimize_protocol(cfg.ansatz, cfg.n_qubits, cfg.delta_phi,
                                nodes, opt, cfg.sim_opts, {});
        }
        results::append_wall_time(io.times_path(), cell, timer.seconds());
        row.a_opt = r.a;
        row.bmse_ratio = table_ratio(r.ratio);
        row.stages = r.stages;
        row.status = r.converged ? "ok" : "max-rounds";
        values.push_back(row.bmse_ratio);
        fresh.push_back(std::move(row));
      }

  double best = values.empty() ? 0.0
                               : *std::min_element(values.begin(),
                                                   values.end());
  for (auto& row : fresh) {
    if (row.bmse_ratio > best + kLocalMinimumMargin)
      row.status = "local-minimum";
    csv.append(row);
  }
}

}  // namespace twistopt::runner
