// SPDX-License-Identifier: MIT
#include "twistopt/circuits.hpp"

#include <algorithm>
#include <map>
#include <numbers>

namespace twistopt::circuits {

double gate_angle(const Gate& g, const std::vector<double>& params) {
  if (g.slot < 0) return g.fixed_angle;
  return params.at(static_cast<std::size_t>(g.slot));
}

int param_count(const AnsatzSpec& spec) {
  if (spec.family == Family::kAAT)
    return 4 + 3 * (spec.n_enc_twists + spec.n_dec_twists);
  return 3 * (spec.n_enc_twists + spec.n_dec_twists) / 2;
}

std::string label(const AnsatzSpec& spec) {
  const char* fam = spec.family == Family::kAAT ? "AAT" : "PAR";
  return std::string(fam) + "_" + std::to_string(spec.n_enc_twists) + "_" +
         std::to_string(spec.n_dec_twists);
}

AnsatzSpec parse_label(const std::string& text) {
  if (text == "classical") return classical_baseline();
  auto fail = [&]() -> AnsatzSpec {
    throw ConfigError("unrecognized ansatz label: " + text);
  };
  if (text.size() < 7) return fail();
  Family fam;
  if (text.rfind("AAT_", 0) == 0)
    fam = Family::kAAT;
  else if (text.rfind("PAR_", 0) == 0)
    fam = Family::kPAR;
  else
    return fail();
  std::size_t sep = text.find('_', 4);
  if (sep == std::string::npos) return fail();
  int n_en = 0, n_de = 0;
  try {
    std::size_t used = 0;
    n_en = std::stoi(text.substr(4, sep - 4), &used);
    if (used != sep - 4) return fail();
    n_de = std::stoi(text.substr(sep + 1), &used);
    if (used != text.size() - sep - 1) return fail();
  } catch (const std::exception&) {
    return fail();
  }
  AnsatzSpec spec{fam, n_en, n_de};
  build(spec);  // validate counts
  return spec;
}

AnsatzSpec classical_baseline() { return AnsatzSpec{Family::kAAT, 0, 0}; }

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Gate make(GateKind kind, AxisLabel axis, int slot, int section, int block,
          int pos) {
  Gate g;
  g.kind = kind;
  g.axis = axis;
  g.slot = slot;
  g.section = static_cast<std::uint8_t>(section);
  g.block = static_cast<std::uint8_t>(block);
  g.pos = static_cast<std::uint8_t>(pos);
  return g;
}

// Base position ids inside an AAT block. The encoding base block runs
// R_y R_z T_z R_x R_z in time (positions 0..4); appended encoding blocks
// reuse the tail positions 2..4. The decoding base block runs
// R_z R_x T_z R_z R_x in time (positions 0..4); appended decoding blocks
// reuse the head positions 0..2. A twist-free side keeps only its boundary
// rotation pair: encoding positions 0,1 or decoding positions 3,4.
void build_aat_gates(const AnsatzSpec& spec, GateSequence& enc,
                     GateSequence& dec, int& slot) {
  if (spec.n_enc_twists == 0) {
    enc.gates.push_back(make(GateKind::kRotation, AxisLabel::kY, slot++, 0, 1, 0));
    enc.gates.push_back(make(GateKind::kRotation, AxisLabel::kZ, slot++, 0, 1, 1));
  } else {
    enc.gates.push_back(make(GateKind::kRotation, AxisLabel::kY, slot++, 0, 1, 0));
    enc.gates.push_back(make(GateKind::kRotation, AxisLabel::kZ, slot++, 0, 1, 1));
    enc.gates.push_back(make(GateKind::kTwist, AxisLabel::kZ, slot++, 0, 1, 2));
    enc.gates.push_back(make(GateKind::kRotation, AxisLabel::kX, slot++, 0, 1, 3));
    enc.gates.push_back(make(GateKind::kRotation, AxisLabel::kZ, slot++, 0, 1, 4));
    for (int b = 2; b <= spec.n_enc_twists; ++b) {
      enc.gates.push_back(make(GateKind::kTwist, AxisLabel::kZ, slot++, 0, b, 2));
      enc.gates.push_back(make(GateKind::kRotation, AxisLabel::kX, slot++, 0, b, 3));
      enc.gates.push_back(make(GateKind::kRotation, AxisLabel::kZ, slot++, 0, b, 4));
    }
  }

  if (spec.n_dec_twists == 0) {
    dec.gates.push_back(make(GateKind::kRotation, AxisLabel::kZ, slot++, 1, 1, 3));
    dec.gates.push_back(make(GateKind::kRotation, AxisLabel::kX, slot++, 1, 1, 4));
  } else {
    // Deeper blocks fire first; block 1 stays next to the measurement.
    for (int b = spec.n_dec_twists; b >= 2; --b) {
      dec.gates.push_back(make(GateKind::kRotation, AxisLabel::kZ, slot++, 1, b, 0));
      dec.gates.push_back(make(GateKind::kRotation, AxisLabel::kX, slot++, 1, b, 1));
      dec.gates.push_back(make(GateKind::kTwist, AxisLabel::kZ, slot++, 1, b, 2));
    }
    dec.gates.push_back(make(GateKind::kRotation, AxisLabel::kZ, slot++, 1, 1, 0));
    dec.gates.push_back(make(GateKind::kRotation, AxisLabel::kX, slot++, 1, 1, 1));
    dec.gates.push_back(make(GateKind::kTwist, AxisLabel::kZ, slot++, 1, 1, 2));
    dec.gates.push_back(make(GateKind::kRotation, AxisLabel::kZ, slot++, 1, 1, 3));
    dec.gates.push_back(make(GateKind::kRotation, AxisLabel::kX, slot++, 1, 1, 4));
  }
}

// PAR layers: encoding T_z T_x R_x in time (positions 0..2), decoding
// R_x T_x T_z (positions 0..2). Encoding layer 1 fires first; decoding
// layer 1 fires last, right before the fixed rotation.
void build_par_gates(const AnsatzSpec& spec, GateSequence& enc,
                     GateSequence& dec, int& slot) {
  int enc_layers = spec.n_enc_twists / 2;
  int dec_layers = spec.n_dec_twists / 2;
  for (int l = 1; l <= enc_layers; ++l) {
    enc.gates.push_back(make(GateKind::kTwist, AxisLabel::kZ, slot++, 0, l, 0));
    enc.gates.push_back(make(GateKind::kTwist, AxisLabel::kX, slot++, 0, l, 1));
    enc.gates.push_back(make(GateKind::kRotation, AxisLabel::kX, slot++, 0, l, 2));
  }
  for (int l = dec_layers; l >= 1; --l) {
    dec.gates.push_back(make(GateKind::kRotation, AxisLabel::kX, slot++, 1, l, 0));
    dec.gates.push_back(make(GateKind::kTwist, AxisLabel::kX, slot++, 1, l, 1));
    dec.gates.push_back(make(GateKind::kTwist, AxisLabel::kZ, slot++, 1, l, 2));
  }
}

}  // namespace

ProtocolCircuits build(const AnsatzSpec& spec) {
  if (spec.n_enc_twists < 0 || spec.n_dec_twists < 0)
    throw ConfigError("twist counts must be non-negative");
  if (spec.family == Family::kPAR) {
    if (spec.n_enc_twists % 2 != 0 || spec.n_dec_twists % 2 != 0)
      throw ConfigError("PAR twist counts must be even (two per layer)");
    if (spec.n_enc_twists == 0 && spec.n_dec_twists == 0)
      throw ConfigError("PAR needs at least one layer");
  }

  ProtocolCircuits pc;
  pc.spec = spec;
  int slot = 0;
  if (spec.family == Family::kAAT)
    build_aat_gates(spec, pc.encoding, pc.decoding, slot);
  else
    build_par_gates(spec, pc.encoding, pc.decoding, slot);
  pc.n_params = slot;

  Gate fixed = make(GateKind::kRotation, AxisLabel::kX, -1, 1, 0, 0);
  fixed.fixed_angle = kHalfPi;
  pc.decoding.gates.push_back(fixed);

  if (pc.n_params != param_count(spec))
    throw std::logic_error("parameter count mismatch in circuit builder");
  return pc;
}

ProtocolCircuits build_aat(int n_enc_twists, int n_dec_twists) {
  return build(AnsatzSpec{Family::kAAT, n_enc_twists, n_dec_twists});
}

ProtocolCircuits build_par(int enc_layers, int dec_layers) {
  return build(AnsatzSpec{Family::kPAR, 2 * enc_layers, 2 * dec_layers});
}

void apply_sequence(collective::DickeState& state, const GateSequence& seq,
                    const std::vector<double>& params) {
  for (const Gate& g : seq.gates) {
    double angle = gate_angle(g, params);
    if (g.kind == GateKind::kRotation)
      collective::apply_rotation(state, g.axis, angle);
    else
      collective::apply_twist(state, g.axis, angle);
  }
}

bool warm_start_compatible(const AnsatzSpec& shallow, const AnsatzSpec& deep) {
  if (shallow.family != deep.family) return false;
  if (shallow.n_enc_twists > deep.n_enc_twists) return false;
  if (shallow.n_dec_twists > deep.n_dec_twists) return false;
  return true;
}

std::vector<double> sequential_init(const AnsatzSpec& shallow,
                                    const std::vector<double>& shallow_params,
                                    const AnsatzSpec& deep) {
  if (!warm_start_compatible(shallow, deep))
    throw ConfigError("cannot warm-start " + label(deep) + " from " +
                      label(shallow));
  ProtocolCircuits from = build(shallow);
  ProtocolCircuits to = build(deep);
  if (shallow_params.size() != static_cast<std::size_t>(from.n_params))
    throw ConfigError("warm-start parameter vector has wrong length");

  std::map<std::tuple<int, int, int>, double> by_role;
  auto collect = [&](const GateSequence& seq) {
    for (const Gate& g : seq.gates)
      if (g.slot >= 0)
        by_role[{g.section, g.block, g.pos}] =
            shallow_params[static_cast<std::size_t>(g.slot)];
  };
  collect(from.encoding);
  collect(from.decoding);

  std::vector<double> out(static_cast<std::size_t>(to.n_params), 0.0);
  auto fill = [&](const GateSequence& seq) {
    for (const Gate& g : seq.gates) {
      if (g.slot < 0) continue;
      auto it = by_role.find({g.section, g.block, g.pos});
      if (it != by_role.end())
        out[static_cast<std::size_t>(g.slot)] = it->second;
    }
  };
  fill(to.encoding);
  fill(to.decoding);
  return out;
}

std::optional<AnsatzSpec> deepest_warm_start(
    const AnsatzSpec& target, const std::vector<AnsatzSpec>& available) {
  std::optional<AnsatzSpec> best;
  auto rank = [](const AnsatzSpec& s) {
    return std::tuple<int, int, int>(s.n_enc_twists + s.n_dec_twists,
                                     s.n_dec_twists, s.n_enc_twists);
  };
  for (const AnsatzSpec& cand : available) {
    if (cand == target) continue;
    if (!warm_start_compatible(cand, target)) continue;
    if (!best || rank(cand) > rank(*best)) best = cand;
  }
  return best;
}

}  // namespace twistopt::circuits
