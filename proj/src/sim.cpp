// SPDX-License-Identifier: MIT
#include "twistopt/sim.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "twistopt/pinv.hpp"
#include "twistopt/tensornet.hpp"

namespace twistopt::sim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// One primitive action on the tensor-network backends. Transverse twists
// expand into rotation-framed z twists; when gate noise is on, a dephasing
// marker follows each z twist inside its frame.
struct Step {
  enum class Kind { kRotation, kTwistZ, kDephase };
  Kind kind = Kind::kRotation;
  AxisLabel axis = AxisLabel::kZ;
  double angle = 0.0;
};

std::vector<Step> expand_steps(const circuits::GateSequence& seq,
                               const std::vector<double>& params,
                               bool with_dephasing) {
  std::vector<Step> out;
  for (const auto& g : seq.gates) {
    double angle = circuits::gate_angle(g, params);
    if (g.kind == circuits::GateKind::kRotation) {
      out.push_back({Step::Kind::kRotation, g.axis, angle});
      continue;
    }
    if (g.axis == AxisLabel::kX)
      out.push_back({Step::Kind::kRotation, AxisLabel::kY, -kHalfPi});
    else if (g.axis == AxisLabel::kY)
      out.push_back({Step::Kind::kRotation, AxisLabel::kX, kHalfPi});
    out.push_back({Step::Kind::kTwistZ, AxisLabel::kZ, angle});
    if (with_dephasing)
      out.push_back({Step::Kind::kDephase, AxisLabel::kZ, 0.0});
    if (g.axis == AxisLabel::kX)
      out.push_back({Step::Kind::kRotation, AxisLabel::kY, kHalfPi});
    else if (g.axis == AxisLabel::kY)
      out.push_back({Step::Kind::kRotation, AxisLabel::kX, -kHalfPi});
  }
  return out;
}

tensornet::Mpo step_unitary_mpo(int n, const Step& s) {
  if (s.kind == Step::Kind::kRotation)
    return tensornet::mpo_rotation(n, axis_vector(s.axis), s.angle);
  return tensornet::mpo_twist_z(n, s.angle);
}

pinv::PermInvOperator step_unitary_table(int n, const Step& s) {
  if (s.kind == Step::Kind::kRotation)
    return pinv::rotation_op(n, axis_vector(s.axis), s.angle);
  return pinv::twist_z_op(n, s.angle);
}

// ---- collective backend --------------------------------------------------

collective::JzMoments collective_node(const circuits::ProtocolCircuits& pc,
                                      const std::vector<double>& params,
                                      int n, double phi) {
  collective::DickeState state = collective::coherent_plus(n);
  circuits::apply_sequence(state, pc.encoding, params);
  collective::apply_phase(state, phi);
  circuits::apply_sequence(state, pc.decoding, params);
  return collective::jz_moments(state);
}

// ---- noiseless matrix product backend ------------------------------------

collective::JzMoments mps_node(const std::vector<Step>& enc,
                               const std::vector<Step>& dec, int n,
                               double phi) {
  using namespace tensornet;
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1,
                         std::pow(2.0, -0.5 * n));
  Mps psi = mps_from_weight_coeffs(n, c);
  auto run = [&](const std::vector<Step>& steps) {
    for (const Step& s : steps) {
      psi = apply_mpo(step_unitary_mpo(n, s), psi);
      // Rotations have bond 1; only twists grow the bond, and the state
      // stays permutation invariant so the growth is undone exactly.
      if (s.kind == Step::Kind::kTwistZ)
        psi = mps_from_weight_coeffs(n, weight_coeffs_from_mps(psi));
    }
  };
  run(enc);
  psi = apply_mpo(mpo_rotation(n, Axis::z(), phi), psi);
  run(dec);
  collective::JzMoments m;
  m.first = std::real(expectation(psi, mpo_jz(n)));
  m.second = std::real(expectation(psi, mpo_jz2(n)));
  return m;
}

// ---- per-gate noisy backend ----------------------------------------------

struct PerGateContext {
  tensornet::DensityMpo rho_enc;
  tensornet::Mpo x_jz;
  tensornet::Mpo x_jz2;
};

PerGateContext build_per_gate(const circuits::ProtocolCircuits& pc,
                              const std::vector<double>& params, int n,
                              const SimulationOptions& opts) {
  using namespace tensornet;
  const double p = opts.noise.p;
  PerGateContext ctx;

  Eigen::Matrix2cd plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  DensityMpo rho = product_mpo(n, plus);
  for (const Step& s : expand_steps(pc.encoding, params, p > 0.0)) {
    if (s.kind == Step::Kind::kDephase) {
      gate_dephasing_apply(rho, p);
      continue;
    }
    rho = conjugate_by_unitary(rho, step_unitary_mpo(n, s),
                               opts.budget_bytes, "encoding");
    // Every gate is collective and the channel is permutation covariant, so
    // the state keeps its symmetry and the twist-driven bond growth can be
    // undone exactly.
    if (s.kind == Step::Kind::kTwistZ)
      rho = pinv::pinv_to_mpo(pinv::table_from_mpo(rho));
  }
  ctx.rho_enc = std::move(rho);

  // Decoding in the Heisenberg picture: maximal unitary segments between
  // dephasing events, folded from the measurement backward.
  std::vector<std::vector<Step>> segments(1);
  for (const Step& s : expand_steps(pc.decoding, params, p > 0.0)) {
    if (s.kind == Step::Kind::kDephase)
      segments.emplace_back();
    else
      segments.back().push_back(s);
  }
  Mpo xj = mpo_jz(n);
  Mpo xj2 = mpo_jz2(n);
  for (int i = static_cast<int>(segments.size()) - 1; i >= 0; --i) {
    const auto& seg = segments[static_cast<std::size_t>(i)];
    if (!seg.empty()) {
      Mpo u = step_unitary_mpo(n, seg[0]);
      for (std::size_t k = 1; k < seg.size(); ++k)
        u = apply_mpo(step_unitary_mpo(n, seg[k]), u);
      xj = fold_observable(xj, u, opts.budget_bytes, "decoding");
      xj2 = fold_observable(xj2, u, opts.budget_bytes, "decoding");
    }
    // The dephasing channel is self-adjoint, so its Heisenberg action is
    // the same coefficient scaling.
    if (i > 0) {
      gate_dephasing_apply(xj, p);
      gate_dephasing_apply(xj2, p);
    }
  }
  ctx.x_jz = std::move(xj);
  ctx.x_jz2 = std::move(xj2);
  return ctx;
}

collective::JzMoments per_gate_node(const PerGateContext& ctx, double phi,
                                    const noisemodel::NoiseSpec& spec) {
  tensornet::DensityMpo rho_phi =
      tensornet::free_evolution_apply(ctx.rho_enc, phi, spec);
  collective::JzMoments m;
  m.first = std::real(tensornet::trace_product(ctx.x_jz, rho_phi));
  m.second = std::real(tensornet::trace_product(ctx.x_jz2, rho_phi));
  return m;
}

// ---- compiled (coefficient table) noisy backend --------------------------

struct CompiledContext {
  pinv::PermInvOperator rho;
  pinv::PermInvOperator x_jz;
  pinv::PermInvOperator x_jz2;
  std::vector<double> weights;
  std::vector<int> phase_k;         // t01 - t10 per type rank
  std::vector<int> transpose_rank;  // rank of the transposed type
};

CompiledContext build_compiled(const circuits::ProtocolCircuits& pc,
                               const std::vector<double>& params, int n,
                               const SimulationOptions& opts) {
  using pinv::PermInvOperator;
  const double p = opts.noise.p;
  const ParallelPolicy policy = opts.policy;
  CompiledContext ctx;

  bool enc_has_twist = false;
  for (const auto& g : pc.encoding.gates)
    if (g.kind == circuits::GateKind::kTwist) enc_has_twist = true;

  if (p == 0.0 || !enc_has_twist) {
    // The encoding is noiseless here, so the probe stays in the symmetric
    // subspace and the table is read off the weight-basis state directly.
    collective::DickeState st = collective::coherent_plus(n);
    circuits::apply_sequence(st, pc.encoding, params);
    ctx.rho = pinv::density_from_dicke_table(st.amp * st.amp.adjoint());
  } else {
    PermInvOperator rho = pinv::plus_density(n);
    for (const Step& s : expand_steps(pc.encoding, params, true)) {
      if (s.kind == Step::Kind::kDephase) {
        pinv::scale_gate_dephasing(rho, p);
        continue;
      }
      // Steps diagonal in the computational basis conjugate by an
      // elementwise phase; only transverse rotations need table products.
      if (s.kind == Step::Kind::kTwistZ) {
        pinv::scale_twist_phase(rho, s.angle);
        continue;
      }
      if (s.axis == AxisLabel::kZ) {
        pinv::scale_free_phase(rho, s.angle);
        continue;
      }
      PermInvOperator u = step_unitary_table(n, s);
      rho = pinv::multiply(pinv::multiply(u, rho, policy), pinv::dagger(u),
                           policy);
    }
    ctx.rho = std::move(rho);
  }

  PermInvOperator xj = pinv::jz_op(n);
  PermInvOperator xj2 = pinv::jz2_op(n);
  std::vector<Step> steps = expand_steps(pc.decoding, params, p > 0.0);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (it->kind == Step::Kind::kDephase) {
      pinv::scale_gate_dephasing(xj, p);
      pinv::scale_gate_dephasing(xj2, p);
      continue;
    }
    // Heisenberg direction: diagonal conjugations act with the opposite
    // phase sign.
    if (it->kind == Step::Kind::kTwistZ) {
      pinv::scale_twist_phase(xj, -it->angle);
      pinv::scale_twist_phase(xj2, -it->angle);
      continue;
    }
    if (it->axis == AxisLabel::kZ) {
      pinv::scale_free_phase(xj, -it->angle);
      pinv::scale_free_phase(xj2, -it->angle);
      continue;
    }
    PermInvOperator u = step_unitary_table(n, *it);
    PermInvOperator ud = pinv::dagger(u);
    xj = pinv::multiply(pinv::multiply(ud, xj, policy), u, policy);
    xj2 = pinv::multiply(pinv::multiply(ud, xj2, policy), u, policy);
  }
  ctx.x_jz = std::move(xj);
  ctx.x_jz2 = std::move(xj2);
  ctx.weights = correlated_weights(n, opts.noise);

  const int count = pinv::type_count(n);
  ctx.phase_k.resize(static_cast<std::size_t>(count));
  ctx.transpose_rank.resize(static_cast<std::size_t>(count));
  for (int r = 0; r < count; ++r) {
    pinv::TypeVector t = pinv::type_at(r);
    ctx.phase_k[static_cast<std::size_t>(r)] = t.t01 - t.t10;
    ctx.transpose_rank[static_cast<std::size_t>(r)] =
        pinv::type_rank(pinv::transpose_type(t));
  }
  return ctx;
}

collective::JzMoments compiled_node(const CompiledContext& ctx, int n,
                                    double phi) {
  const int count = pinv::type_count(n);
  Complex m1{0.0, 0.0};
  Complex m2{0.0, 0.0};
  for (int r = 0; r < count; ++r) {
    const auto rr = static_cast<std::size_t>(r);
    Complex f = ctx.rho.coeff[rr] * ctx.weights[rr] *
                std::polar(1.0, -phi * ctx.phase_k[rr]);
    const auto tr = static_cast<std::size_t>(ctx.transpose_rank[rr]);
    m1 += ctx.x_jz.coeff[tr] * f;
    m2 += ctx.x_jz2.coeff[tr] * f;
  }
  return {m1.real(), m2.real()};
}

}  // namespace

std::vector<double> correlated_weights(int n_qubits,
                                       const noisemodel::NoiseSpec& spec) {
  const int count = pinv::type_count(n_qubits);
  std::vector<pinv::TypeVector> types(static_cast<std::size_t>(count));
  for (int r = 0; r < count; ++r)
    types[static_cast<std::size_t>(r)] = pinv::type_at(r);
  std::vector<double> g(static_cast<std::size_t>(count), 0.0);
  if (spec.c2 == 0.0 || n_qubits == 1) {
    for (int r = 0; r < count; ++r) {
      const pinv::TypeVector& t = types[static_cast<std::size_t>(r)];
      g[static_cast<std::size_t>(r)] =
          pinv::type_multiplicity(n_qubits, t) *
          std::exp(-0.5 * spec.c1 * (t.t01 + t.t10));
    }
    return g;
  }

  // Transfer recursion over sites. A site letter is a bra/ket bit pair with
  // a phase signature in {0, +1, -1}; the state is (previous signature,
  // accumulated type).
  constexpr int kLetterSig[4] = {0, 1, -1, 0};
  constexpr int kSigVal[3] = {0, 1, -1};
  auto sig_index = [](int s) { return s == 0 ? 0 : (s == 1 ? 1 : 2); };
  auto bumped_rank = [](const pinv::TypeVector& t, int letter) {
    pinv::TypeVector b = t;
    if (letter == 1) ++b.t01;
    if (letter == 2) ++b.t10;
    if (letter == 3) ++b.t11;
    return pinv::type_rank(b);
  };

  std::vector<std::vector<double>> dp(
      3, std::vector<double>(static_cast<std::size_t>(count), 0.0));
  for (int l = 0; l < 4; ++l) {
    int s = kLetterSig[l];
    dp[static_cast<std::size_t>(sig_index(s))]
      [static_cast<std::size_t>(bumped_rank({}, l))] +=
        noisemodel::weight_local_factor(spec, s);
  }
  for (int j = 2; j <= n_qubits; ++j) {
    std::vector<std::vector<double>> next(
        3, std::vector<double>(static_cast<std::size_t>(count), 0.0));
    int reach = pinv::type_count(j - 1);
    for (int prev = 0; prev < 3; ++prev)
      for (int r = 0; r < reach; ++r) {
        double v = dp[static_cast<std::size_t>(prev)][static_cast<std::size_t>(r)];
        if (v == 0.0) continue;
        const pinv::TypeVector& t = types[static_cast<std::size_t>(r)];
        for (int l = 0; l < 4; ++l) {
          int s = kLetterSig[l];
          next[static_cast<std::size_t>(sig_index(s))]
              [static_cast<std::size_t>(bumped_rank(t, l))] +=
              v * noisemodel::weight_nn_factor(spec, kSigVal[prev], s) *
              noisemodel::weight_local_factor(spec, s);
        }
      }
    dp = std::move(next);
  }
  for (int prev = 0; prev < 3; ++prev)
    for (int r = 0; r < count; ++r)
      g[static_cast<std::size_t>(r)] +=
          dp[static_cast<std::size_t>(prev)][static_cast<std::size_t>(r)];
  return g;
}

objective::MomentCurve moment_curve(const circuits::ProtocolCircuits& pc,
                                    const std::vector<double>& params,
                                    int n_qubits,
                                    const std::vector<double>& phi,
                                    const SimulationOptions& opts) {
  if (static_cast<int>(params.size()) != pc.n_params)
    throw ConfigError("parameter vector length does not match the circuit");
  objective::MomentCurve curve;
  curve.phi = phi;
  curve.jz.assign(phi.size(), 0.0);
  curve.jz2.assign(phi.size(), 0.0);
  const int m = static_cast<int>(phi.size());
  const bool par = opts.policy == ParallelPolicy::kOpenMP;

  if (opts.engine == Engine::kCollective) {
    if (opts.noise.any())
      throw ConfigError(
          "collective engine is noiseless; use the tensor-network engine "
          "for noisy protocols");
    collective::warm_caches(n_qubits);
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < m; ++i) {
      collective::JzMoments mm = collective_node(
          pc, params, n_qubits, phi[static_cast<std::size_t>(i)]);
      curve.jz[static_cast<std::size_t>(i)] = mm.first;
      curve.jz2[static_cast<std::size_t>(i)] = mm.second;
    }
    return curve;
  }

  noisemodel::validate(opts.noise, n_qubits);
  if (!opts.noise.any()) {
    std::vector<Step> enc = expand_steps(pc.encoding, params, false);
    std::vector<Step> dec = expand_steps(pc.decoding, params, false);
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < m; ++i) {
      collective::JzMoments mm =
          mps_node(enc, dec, n_qubits, phi[static_cast<std::size_t>(i)]);
      curve.jz[static_cast<std::size_t>(i)] = mm.first;
      curve.jz2[static_cast<std::size_t>(i)] = mm.second;
    }
    return curve;
  }

  if (opts.decoding_path == DecodingPath::kCompiled) {
    CompiledContext ctx = build_compiled(pc, params, n_qubits, opts);
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < m; ++i) {
      collective::JzMoments mm =
          compiled_node(ctx, n_qubits, phi[static_cast<std::size_t>(i)]);
      curve.jz[static_cast<std::size_t>(i)] = mm.first;
      curve.jz2[static_cast<std::size_t>(i)] = mm.second;
    }
    return curve;
  }

  PerGateContext ctx = build_per_gate(pc, params, n_qubits, opts);
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < m; ++i) {
    collective::JzMoments mm =
        per_gate_node(ctx, phi[static_cast<std::size_t>(i)], opts.noise);
    curve.jz[static_cast<std::size_t>(i)] = mm.first;
    curve.jz2[static_cast<std::size_t>(i)] = mm.second;
  }
  return curve;
}

collective::JzMoments protocol_moments(const circuits::ProtocolCircuits& pc,
                                       const std::vector<double>& params,
                                       int n_qubits, double phi,
                                       const SimulationOptions& opts) {
  objective::MomentCurve curve =
      moment_curve(pc, params, n_qubits, {phi}, opts);
  return {curve.jz[0], curve.jz2[0]};
}

objective::EstimatorCurves estimator_curves(
    const circuits::ProtocolCircuits& pc, const std::vector<double>& params,
    int n_qubits, const std::vector<double>& phi, double a,
    const SimulationOptions& opts) {
  objective::MomentCurve curve =
      moment_curve(pc, params, n_qubits, phi, opts);
  return objective::estimator_curves_from_moments(curve, a);
}

optimize::ObjectiveFn make_bmse_objective(const circuits::ProtocolCircuits& pc,
                                          int n_qubits,
                                          const objective::GaussianPrior& prior,
                                          const objective::QuadratureRule& rule,
                                          const SimulationOptions& opts) {
  std::vector<double> phis = objective::phi_nodes(prior, rule);
  return [pc, n_qubits, prior, rule, opts,
          phis](const std::vector<double>& params) {
    objective::MomentCurve curve =
        moment_curve(pc, params, n_qubits, phis, opts);
    return objective::accumulate_bmse(curve, rule, prior).min_ratio();
  };
}

ProtocolEvaluation evaluate_protocol(const circuits::ProtocolCircuits& pc,
                                     const std::vector<double>& params,
                                     int n_qubits,
                                     const objective::GaussianPrior& prior,
                                     const objective::QuadratureRule& rule,
                                     const SimulationOptions& opts) {
  objective::MomentCurve curve = moment_curve(
      pc, params, n_qubits, objective::phi_nodes(prior, rule), opts);
  objective::BmseBreakdown acc = objective::accumulate_bmse(curve, rule, prior);
  ProtocolEvaluation ev;
  ev.breakdown = acc;
  ev.a = acc.a_opt_or_zero();
  ev.ratio = acc.min_ratio();
  return ev;
}

}  // namespace twistopt::sim
