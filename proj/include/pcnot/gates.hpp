// Copyright 2026 The pcnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pcnot/detection.hpp"
#include "pcnot/fock.hpp"
#include "pcnot/optics.hpp"

namespace pcnot {

// Logical frames used by the presets. PBS-1 sits in the lab frame;
// PBS-2 transmits 45 deg light, and the qubits around it are analyzed 45 deg
// further on (|0> = V, |1> = -H). The photon travelling from PBS-1 to PBS-2
// is read in a left-handed frame, which absorbs the PBS reflection sign.
namespace frames {
inline constexpr LogicalFrame kLab{0.0, 90.0};
inline constexpr LogicalFrame kPbs2Side{90.0, 180.0};
inline constexpr LogicalFrame kCopy{0.0, -90.0};
inline constexpr LogicalFrame kDiagonal{45.0, -45.0};
}  // namespace frames

enum class Pauli { kX, kZ };

/// Classically controlled correction. Fires when the heralding detector on
/// `trigger_port` reads `trigger_value`; applies `pauli` (as a half-wave
/// plate in that port's logical frame) to `target_port`.
struct FeedForwardRule {
  std::string trigger_port;
  int trigger_value = 1;
  std::string target_port;
  Pauli pauli = Pauli::kX;
};

/// Logical state of a group of single photons, one per port. Amplitudes
/// are indexed by bitstring, first port most significant.
struct LogicalPrep {
  std::vector<QubitPort> qubits;
  std::vector<Complex> amplitudes;
};

struct Herald {
  QubitPort detector;
  std::vector<int> accepted;
};

/// A post-selected linear-optical gate: circuit, logical inputs and their
/// frames, ancilla preparation, heralding detectors with accepted values,
/// feed-forward rules and logical outputs.
struct LinearOpticalGate {
  std::string name;
  OpticalCircuit circuit;
  std::vector<QubitPort> inputs;
  std::vector<LogicalPrep> ancillas;
  std::vector<Herald> heralds;
  std::vector<FeedForwardRule> feed_forward;
  std::vector<QubitPort> outputs;
  std::optional<Eigen::MatrixXcd> ideal;

  int total_photons() const;
};

struct HeraldBranch {
  std::vector<int> outcome;
  double probability = 0.0;
  /// Corrected, unnormalized projection.
  PhotonicState state;
};

struct GateOutcome {
  PostSelectOutcome combined;
  std::vector<HeraldBranch> branches;
};

// Preset constructors. `fiber_rotation_deg` inserts a BasisRotator on the
// PBS-1 -> PBS-2 link to model uncompensated birefringence.
LinearOpticalGate cnot_one_ancilla_gate(bool feed_forward = false, double fiber_rotation_deg = 0.0);
LinearOpticalGate cnot_two_ancilla_gate();
LinearOpticalGate encoder_gate();
LinearOpticalGate destructive_cnot_gate();
/// Empty circuit on two qubits; the reference for plumbing checks.
LinearOpticalGate identity_gate();

/// By scenario name: cnot1a, cnot1a-ff, cnot2a, encoder, dcnot, identity.
LinearOpticalGate preset(std::string_view name);
std::vector<std::string> preset_names();

/// Sum over bitstrings of amplitude * product of creation operators, applied
/// to `base`. Photons land in bin 0.
PhotonicState prepare(const PhotonicState& base, const LogicalPrep& prep);

/// Ideal-photon run: build inputs and ancillas, evolve, post-select every
/// accepted herald combination with one photon per heralded and output
/// port, apply feed-forward corrections, and combine.
GateOutcome run_gate(const LinearOpticalGate& gate, std::span<const Complex> input);

/// Every combination of accepted herald values, in herald order.
std::vector<std::vector<int>> herald_outcomes(const LinearOpticalGate& gate);
/// Heralds valued per `outcome`, one photon in each output, any polarization.
DetectionPattern branch_pattern(const LinearOpticalGate& gate, const std::vector<int>& outcome);
/// Wave-plate corrections fired by `outcome`, applied to `s` (any bin count).
PhotonicState apply_feed_forward(const LinearOpticalGate& gate, const std::vector<int>& outcome,
                                 const PhotonicState& s);
/// Logical analyzer angle on `port` that, measured before the corrections
/// fired by `outcome`, reproduces `theta_deg` measured after them.
double corrected_analyzer_deg(const LinearOpticalGate& gate, const std::vector<int>& outcome,
                              const std::string& port, double theta_deg);

PostSelectOutcome cnot_one_ancilla(const InputAmplitudes& input);
PostSelectOutcome cnot_one_ancilla_with_feedforward(const InputAmplitudes& input);
PostSelectOutcome cnot_two_ancilla(const InputAmplitudes& input);
PostSelectOutcome encoder(Complex beta0, Complex beta1);
PostSelectOutcome destructive_cnot(const InputAmplitudes& input);

/// Logical amplitudes of the gate outputs in a (combined) conditional
/// state. Throws if the logical state is not pure across herald branches.
Eigen::VectorXcd output_logical_state(const PhotonicState& conditional,
                                      const LinearOpticalGate& gate);

struct LogicalMap {
  /// Post-selected map scaled so that M^dagger M = p I when ideal.
  Eigen::MatrixXcd matrix;
  double success_probability = 0.0;
  /// max |M / sqrt(p) - ideal|; NaN when the gate carries no ideal map.
  double deviation_from_ideal = 0.0;
  double probability_spread = 0.0;
  double branch_deviation = 0.0;
  double linearity_deviation = 0.0;
  /// Success probability varies across inputs, or herald branches disagree,
  /// beyond 1e-10. Signals a convention bug.
  bool flagged = false;
};

LogicalMap extract_logical_map(const LinearOpticalGate& gate);

/// Runs encoder_gate() and destructive_cnot_gate() back to back on a shared
/// three-port registry, post-selecting after each stage, and extracts the
/// resulting control/target map.
LogicalMap encoder_then_destructive_cnot_map();

Eigen::Matrix4cd cnot_matrix();

enum class BellLabel { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

/// Bell state on two qubit ports of `registry`; all other ports empty.
PhotonicState bell_state(BellLabel label, const ModeRegistry& registry, const QubitPort& first,
                         const QubitPort& second);

/// Phi+ mixed with white noise, rho = v |Phi+><Phi+| + (1 - v) I / 4,
/// purified through internal bins: the noise terms carry photons in bins
/// orthogonal to the coherent term, as fully distinguishable events would.
PhotonicState isotropic_phi_plus(double visibility, const QubitPort& first, const QubitPort& second);

struct ChshAngles {
  double a = 0.0;
  double b = 22.5;
  double a_prime = 45.0;
  double b_prime = 67.5;
};

/// Polarization correlation E(x, y) = sum s t P(s, t) for analyzers at x
/// (first qubit) and y (second qubit), angles in the logical frames.
double correlation(const Eigen::Matrix4cd& rho, double x_deg, double y_deg);

/// S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|. Throws unless every term
/// holds exactly one photon in each qubit port.
double chsh_value(const Eigen::Matrix4cd& rho, const ChshAngles& angles = {});
double chsh_value(const PhotonicState& state, std::span<const QubitPort> qubits,
                  const ChshAngles& angles = {});

}  // namespace pcnot
