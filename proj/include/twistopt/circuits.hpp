// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistopt/collective.hpp"
#include "twistopt/common.hpp"

// Variational protocol circuits built from global rotations R_n(t) =
// exp(-i t n.J) and one-axis twists T_n(t) = exp(-i t (n.J)^2). A protocol is
// an encoding sequence (before the free phase accumulation) plus a decoding
// sequence (after it, ending in a fixed R_x(pi/2) that maps the accumulated
// phase onto the measured J_z).
namespace twistopt::circuits {

enum class GateKind : std::uint8_t { kRotation, kTwist };

struct Gate {
  GateKind kind = GateKind::kRotation;
  AxisLabel axis = AxisLabel::kZ;
  // Index into the parameter vector, or -1 for a fixed angle.
  int slot = -1;
  double fixed_angle = 0.0;
  // Structural role, used to line up slots between circuits of different
  // depth: which side, which block (1 = the block anchored at the outer
  // boundary), and a stable position id inside the block.
  std::uint8_t section = 0;  // 0 encoding, 1 decoding
  std::uint8_t block = 1;
  std::uint8_t pos = 0;
};

struct GateSequence {
  std::vector<Gate> gates;
};

double gate_angle(const Gate& g, const std::vector<double>& params);

// Two alternation families. AAT interleaves one twist with neighbouring
// rotations per block; PAR stacks twist-twist-rotation layers, so its twist
// counts grow two per layer and must be even.
enum class Family : std::uint8_t { kAAT, kPAR };

// Ansatz identity: family plus number of twists on the encoding and decoding
// side. AAT_0_0 is the twist-free baseline ("classical").
struct AnsatzSpec {
  Family family = Family::kAAT;
  int n_enc_twists = 0;
  int n_dec_twists = 0;

  bool operator==(const AnsatzSpec&) const = default;
};

int param_count(const AnsatzSpec& spec);
std::string label(const AnsatzSpec& spec);            // e.g. "AAT_1_2"
AnsatzSpec parse_label(const std::string& text);      // accepts "classical"
AnsatzSpec classical_baseline();                      // AAT_0_0

struct ProtocolCircuits {
  AnsatzSpec spec;
  GateSequence encoding;
  GateSequence decoding;  // includes the fixed final R_x(pi/2)
  int n_params = 0;
};

// Builds the gate lists with parameter slots assigned in firing order,
// encoding first. Throws ConfigError on invalid twist counts.
ProtocolCircuits build(const AnsatzSpec& spec);
ProtocolCircuits build_aat(int n_enc_twists, int n_dec_twists);
ProtocolCircuits build_par(int enc_layers, int dec_layers);

// Runs a gate sequence on a symmetric-subspace state.
void apply_sequence(collective::DickeState& state, const GateSequence& seq,
                    const std::vector<double>& params);

// Warm start: parameters for `deep` with every slot whose structural role
// also exists in `shallow` copied from the optimized shallow parameters and
// all newly added slots set to zero (identity gates). Requires the same
// family and componentwise deeper-or-equal twist counts.
std::vector<double> sequential_init(const AnsatzSpec& shallow,
                                    const std::vector<double>& shallow_params,
                                    const AnsatzSpec& deep);

// True when `deep` can be warm-started from `shallow`.
bool warm_start_compatible(const AnsatzSpec& shallow, const AnsatzSpec& deep);

// Picks the deepest strictly-shallower compatible spec out of `available`
// (ties broken toward more decoding twists, then more encoding twists);
// nullopt when none qualifies.
std::optional<AnsatzSpec> deepest_warm_start(
    const AnsatzSpec& target, const std::vector<AnsatzSpec>& available);

}  // namespace twistopt::circuits
