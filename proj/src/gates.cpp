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

#include "pcnot/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pcnot/errors.hpp"

namespace pcnot {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kDeg = std::numbers::pi / 180.0;

Eigen::VectorXcd basis_vector(Eigen::Index dim, Eigen::Index k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(k) = 1.0;
  return v;
}

const QubitPort& output_for(const LinearOpticalGate& gate, const std::string& port) {
  for (const auto& q : gate.outputs) {
    if (q.port == port) return q;
  }
  throw ConfigError("feed-forward target '" + port + "' is not a gate output");
}

std::vector<std::vector<int>> outcomes_of(const std::vector<Herald>& heralds) {
  std::vector<std::vector<int>> out{{}};
  for (const auto& h : heralds) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out) {
      for (int v : h.accepted) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<QubitPort> herald_ports(const LinearOpticalGate& gate) {
  std::vector<QubitPort> out;
  for (const auto& h : gate.heralds) out.push_back(h.detector);
  return out;
}

Eigen::VectorXcd single_group(const std::map<FockState, Eigen::VectorXcd>& groups,
                              Eigen::Index dim) {
  if (groups.empty()) return Eigen::VectorXcd::Zero(dim);
  if (groups.size() > 1) {
    throw Error("branch state carries more than one environment configuration");
  }
  return groups.begin()->second;
}

}  // namespace

DetectionPattern branch_pattern(const LinearOpticalGate& gate, const std::vector<int>& outcome) {
  DetectionPattern p;
  p.total_photons = gate.total_photons();
  for (std::size_t i = 0; i < gate.heralds.size(); ++i) {
    const auto& d = gate.heralds[i].detector;
    p.required.push_back(DetectionRequirement{d.port, d.frame, outcome[i], 1});
  }
  for (const auto& q : gate.outputs) {
    p.required.push_back(DetectionRequirement{q.port, q.frame, std::nullopt, 1});
  }
  return p;
}

PhotonicState apply_feed_forward(const LinearOpticalGate& gate, const std::vector<int>& outcome,
                                 const PhotonicState& s) {
  OpticalCircuit corr(gate.circuit.registry());
  for (const auto& rule : gate.feed_forward) {
    bool fired = false;
    for (std::size_t i = 0; i < gate.heralds.size(); ++i) {
      if (gate.heralds[i].detector.port == rule.trigger_port && outcome[i] == rule.trigger_value) {
        fired = true;
      }
    }
    if (!fired) continue;
    const LogicalFrame& f = output_for(gate, rule.target_port).frame;
    const double plate = rule.pauli == Pauli::kX ? f.bit_flip_plate_deg() : f.phase_flip_plate_deg();
    corr.add(WavePlate{plate}, {rule.target_port});
  }
  if (corr.elements().empty() || s.empty()) return s;
  return evolve(s, compile(corr, s.registry()));
}

std::vector<std::vector<int>> herald_outcomes(const LinearOpticalGate& gate) {
  return outcomes_of(gate.heralds);
}

double corrected_analyzer_deg(const LinearOpticalGate& gate, const std::vector<int>& outcome,
                              const std::string& port, double theta_deg) {
  // X maps cos t|0> + sin t|1> to angle 90 - t, Z to -t. Both are their own
  // adjoints, so the later corrections are undone first.
  double t = theta_deg;
  for (auto it = gate.feed_forward.rbegin(); it != gate.feed_forward.rend(); ++it) {
    if (it->target_port != port) continue;
    bool fired = false;
    for (std::size_t i = 0; i < gate.heralds.size(); ++i) {
      if (gate.heralds[i].detector.port == it->trigger_port && outcome[i] == it->trigger_value) {
        fired = true;
      }
    }
    if (fired) t = it->pauli == Pauli::kX ? 90.0 - t : -t;
  }
  return t;
}

int LinearOpticalGate::total_photons() const {
  int n = static_cast<int>(inputs.size());
  for (const auto& a : ancillas) n += static_cast<int>(a.qubits.size());
  return n;
}

Eigen::Matrix4cd cnot_matrix() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(3, 2) = 1.0;
  m(2, 3) = 1.0;
  return m;
}

LinearOpticalGate cnot_one_ancilla_gate(bool feed_forward, double fiber_rotation_deg) {
  ModeRegistry reg({"A", "C", "T"});
  OpticalCircuit c(reg);
  c.add(PolarizingBS{0.0}, {"A", "C"});
  if (fiber_rotation_deg != 0.0) c.add(BasisRotator{fiber_rotation_deg}, {"A"});
  c.add(PolarizingBS{45.0}, {"A", "T"});

  LinearOpticalGate g{feed_forward ? "cnot1a-ff" : "cnot1a", std::move(c), {}, {}, {}, {}, {}, {}};
  g.inputs = {{"C", frames::kLab}, {"T", frames::kPbs2Side}};
  g.ancillas = {LogicalPrep{{{"A", frames::kLab}}, {kInvSqrt2, kInvSqrt2}}};
  g.heralds = {Herald{{"A", frames::kPbs2Side}, feed_forward ? std::vector<int>{0, 1} : std::vector<int>{0}}};
  if (feed_forward) g.feed_forward = {FeedForwardRule{"A", 1, "T", Pauli::kX}};
  g.outputs = {{"C", frames::kLab}, {"T", frames::kPbs2Side}};
  g.ideal = Eigen::MatrixXcd(cnot_matrix());
  return g;
}

LinearOpticalGate cnot_two_ancilla_gate() {
  ModeRegistry reg({"A1", "C", "A2", "T"});
  OpticalCircuit c(reg);
  c.add(PolarizingBS{0.0}, {"A1", "C"});
  c.add(PolarizingBS{45.0}, {"A2", "T"});

  LinearOpticalGate g{"cnot2a", std::move(c), {}, {}, {}, {}, {}, {}};
  g.inputs = {{"C", frames::kLab}, {"T", frames::kPbs2Side}};
  g.ancillas = {LogicalPrep{{{"A1", frames::kLab}, {"A2", frames::kLab}},
                            {kInvSqrt2, 0.0, 0.0, kInvSqrt2}}};
  g.heralds = {Herald{{"A1", frames::kDiagonal}, {0, 1}},
               Herald{{"A2", frames::kPbs2Side}, {0, 1}}};
  g.feed_forward = {FeedForwardRule{"A1", 1, "C", Pauli::kZ},
                    FeedForwardRule{"A2", 1, "T", Pauli::kX}};
  g.outputs = {{"C", frames::kLab}, {"T", frames::kPbs2Side}};
  g.ideal = Eigen::MatrixXcd(cnot_matrix());
  return g;
}

LinearOpticalGate encoder_gate() {
  ModeRegistry reg({"A", "C"});
  OpticalCircuit c(reg);
  c.add(PolarizingBS{0.0}, {"A", "C"});

  LinearOpticalGate g{"encoder", std::move(c), {}, {}, {}, {}, {}, {}};
  g.inputs = {{"C", frames::kLab}};
  g.ancillas = {LogicalPrep{{{"A", frames::kLab}}, {kInvSqrt2, kInvSqrt2}}};
  g.outputs = {{"C", frames::kLab}, {"A", frames::kCopy}};
  Eigen::MatrixXcd ideal = Eigen::MatrixXcd::Zero(4, 2);
  ideal(0, 0) = 1.0;
  ideal(3, 1) = 1.0;
  g.ideal = ideal;
  return g;
}

LinearOpticalGate destructive_cnot_gate() {
  ModeRegistry reg({"A", "T"});
  OpticalCircuit c(reg);
  c.add(PolarizingBS{45.0}, {"A", "T"});

  LinearOpticalGate g{"dcnot", std::move(c), {}, {}, {}, {}, {}, {}};
  g.inputs = {{"A", frames::kCopy}, {"T", frames::kPbs2Side}};
  g.heralds = {Herald{{"A", frames::kPbs2Side}, {0}}};
  g.outputs = {{"T", frames::kPbs2Side}};
  Eigen::MatrixXcd ideal = Eigen::MatrixXcd::Zero(2, 4);
  for (int ctl = 0; ctl < 2; ++ctl) {
    for (int t = 0; t < 2; ++t) ideal(ctl ^ t, 2 * ctl + t) = 1.0;
  }
  g.ideal = ideal;
  return g;
}

LinearOpticalGate identity_gate() {
  ModeRegistry reg({"C", "T"});
  LinearOpticalGate g{"identity", OpticalCircuit(reg), {}, {}, {}, {}, {}, {}};
  g.inputs = {{"C", frames::kLab}, {"T", frames::kLab}};
  g.outputs = g.inputs;
  g.ideal = Eigen::MatrixXcd(Eigen::Matrix4cd::Identity());
  return g;
}

LinearOpticalGate preset(std::string_view name) {
  if (name == "cnot1a") return cnot_one_ancilla_gate(false);
  if (name == "cnot1a-ff") return cnot_one_ancilla_gate(true);
  if (name == "cnot2a") return cnot_two_ancilla_gate();
  if (name == "encoder") return encoder_gate();
  if (name == "dcnot") return destructive_cnot_gate();
  if (name == "identity") return identity_gate();
  throw ConfigError("unknown gate preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"cnot1a", "cnot1a-ff", "cnot2a", "encoder", "dcnot", "identity"};
}

PhotonicState prepare(const PhotonicState& base, const LogicalPrep& prep) {
  const std::size_t k = prep.qubits.size();
  if (prep.amplitudes.size() != (std::size_t{1} << k)) {
    throw ConfigError("logical preparation needs 2^k amplitudes");
  }
  const auto& reg = base.registry();
  PhotonicState result(reg, base.max_photons());
  for (std::size_t idx = 0; idx < prep.amplitudes.size(); ++idx) {
    const Complex amp = prep.amplitudes[idx];
    if (amp == Complex(0.0)) continue;
    PhotonicState s = base;
    for (std::size_t i = 0; i < k; ++i) {
      const int bit = static_cast<int>((idx >> (k - 1 - i)) & 1u);
      const auto& q = prep.qubits[i];
      const Eigen::Vector2cd pol = q.frame.polarization(bit).cast<Complex>();
      const auto modes = photon_modes(reg, q.port, pol);
      s = apply_creation(s, modes);
    }
    result = superpose(result, scaled(s, amp));
  }
  return result;
}

GateOutcome run_gate(const LinearOpticalGate& gate, std::span<const Complex> input) {
  const std::size_t dim = std::size_t{1} << gate.inputs.size();
  if (input.size() != dim) {
    throw ConfigError("gate '" + gate.name + "' expects " + std::to_string(dim) + " amplitudes");
  }
  double n2 = 0.0;
  for (const auto& x : input) n2 += std::norm(x);
  if (std::abs(n2 - 1.0) > 1e-10) throw ConfigError("gate input is not normalized");

  const auto& reg = gate.circuit.registry();
  PhotonicState state = PhotonicState::vacuum(reg);
  state = prepare(state, LogicalPrep{gate.inputs, {input.begin(), input.end()}});
  for (const auto& anc : gate.ancillas) state = prepare(state, anc);
  const PhotonicState out = evolve(state, compile(gate.circuit));

  GateOutcome result{PostSelectOutcome{PhotonicState(reg), 0.0, 0.0, true}, {}};
  PhotonicState sum(reg);
  for (const auto& outcome : herald_outcomes(gate)) {
    PhotonicState proj = project(out, branch_pattern(gate, outcome));
    const double p = proj.norm_squared();
    proj = apply_feed_forward(gate, outcome, proj);
    sum = superpose(sum, proj);
    result.combined.success_probability += p;
    result.branches.push_back(HeraldBranch{outcome, p, std::move(proj)});
  }

  std::vector<std::string> ports;
  for (const auto& h : gate.heralds) ports.push_back(h.detector.port);
  for (const auto& q : gate.outputs) ports.push_back(q.port);
  DetectionPattern counts = DetectionPattern::coincidence(ports);
  counts.total_photons = gate.total_photons();
  result.combined.residual_weight = post_select(out, counts).residual_weight;
  if (!sum.empty()) {
    result.combined.conditional_state = normalize(sum).state;
    result.combined.empty = false;
  }
  return result;
}

PostSelectOutcome cnot_one_ancilla(const InputAmplitudes& input) {
  input.validate();
  return run_gate(cnot_one_ancilla_gate(false), input.view()).combined;
}

PostSelectOutcome cnot_one_ancilla_with_feedforward(const InputAmplitudes& input) {
  input.validate();
  return run_gate(cnot_one_ancilla_gate(true), input.view()).combined;
}

PostSelectOutcome cnot_two_ancilla(const InputAmplitudes& input) {
  input.validate();
  return run_gate(cnot_two_ancilla_gate(), input.view()).combined;
}

PostSelectOutcome encoder(Complex beta0, Complex beta1) {
  const std::array<Complex, 2> in{beta0, beta1};
  return run_gate(encoder_gate(), in).combined;
}

PostSelectOutcome destructive_cnot(const InputAmplitudes& input) {
  input.validate();
  return run_gate(destructive_cnot_gate(), input.view()).combined;
}

Eigen::VectorXcd output_logical_state(const PhotonicState& conditional,
                                      const LinearOpticalGate& gate) {
  const auto spectators = herald_ports(gate);
  const auto groups = logical_readout(conditional, gate.outputs, spectators);
  if (groups.empty()) throw ZeroNormError("no output state");
  Eigen::VectorXcd ref = groups.begin()->second;
  ref /= ref.norm();
  for (const auto& [env, v] : groups) {
    const double n = v.norm();
    if (n == 0.0) continue;
    if (std::abs(std::abs(ref.dot(v / n)) - 1.0) > 1e-9) {
      throw Error("output logical state is mixed across herald branches");
    }
  }
  return ref;
}

LogicalMap extract_logical_map(const LinearOpticalGate& gate) {
  const auto din = static_cast<Eigen::Index>(1) << gate.inputs.size();
  const auto dout = static_cast<Eigen::Index>(1) << gate.outputs.size();
  const auto outcomes = herald_outcomes(gate);
  const auto spectators = herald_ports(gate);

  std::vector<Eigen::MatrixXcd> maps(outcomes.size(), Eigen::MatrixXcd::Zero(dout, din));
  std::vector<double> p_in(static_cast<std::size_t>(din), 0.0);
  for (Eigen::Index j = 0; j < din; ++j) {
    const Eigen::VectorXcd e = basis_vector(din, j);
    const GateOutcome run = run_gate(gate, std::span<const Complex>(e.data(), e.size()));
    p_in[static_cast<std::size_t>(j)] = run.combined.success_probability;
    for (std::size_t b = 0; b < outcomes.size(); ++b) {
      maps[b].col(j) = single_group(logical_readout(run.branches[b].state, gate.outputs, spectators), dout);
    }
  }

  LogicalMap lm;
  const auto [pmin, pmax] = std::minmax_element(p_in.begin(), p_in.end());
  lm.probability_spread = *pmax - *pmin;
  double p_total = 0.0;
  for (double p : p_in) p_total += p;
  p_total /= static_cast<double>(din);
  lm.success_probability = p_total;

  std::vector<Eigen::MatrixXcd> unit(outcomes.size());
  for (std::size_t b = 0; b < outcomes.size(); ++b) {
    const double pb = maps[b].squaredNorm() / static_cast<double>(din);
    unit[b] = pb > 0.0 ? Eigen::MatrixXcd(maps[b] / std::sqrt(pb)) : maps[b];
    if (b > 0) {
      lm.branch_deviation = std::max(lm.branch_deviation, (unit[b] - unit[0]).cwiseAbs().maxCoeff());
    }
  }
  lm.matrix = std::sqrt(p_total) * unit[0];
  lm.deviation_from_ideal = gate.ideal ? (unit[0] - *gate.ideal).cwiseAbs().maxCoeff()
                                       : std::numeric_limits<double>::quiet_NaN();

  // Superposition inputs: (e0 + ek)/sqrt2 and the uniform vector.
  std::vector<Eigen::VectorXcd> probes;
  for (Eigen::Index k = 1; k < din; ++k) {
    probes.push_back((basis_vector(din, 0) + basis_vector(din, k)) * kInvSqrt2);
  }
  probes.push_back(Eigen::VectorXcd::Ones(din) / std::sqrt(static_cast<double>(din)));
  for (const auto& x : probes) {
    const GateOutcome run = run_gate(gate, std::span<const Complex>(x.data(), x.size()));
    for (std::size_t b = 0; b < outcomes.size(); ++b) {
      const Eigen::VectorXcd v =
          single_group(logical_readout(run.branches[b].state, gate.outputs, spectators), dout);
      lm.linearity_deviation =
          std::max(lm.linearity_deviation, (v - maps[b] * x).cwiseAbs().maxCoeff());
    }
  }
  lm.flagged = lm.probability_spread > 1e-10 || lm.branch_deviation > 1e-10;
  return lm;
}

LogicalMap encoder_then_destructive_cnot_map() {
  const LinearOpticalGate enc = encoder_gate();
  const LinearOpticalGate dc = destructive_cnot_gate();
  const ModeRegistry reg({"A", "C", "T"});

  OpticalCircuit stage1(reg);
  for (const auto& e : enc.circuit.elements()) stage1.add(e);
  OpticalCircuit stage2(reg);
  for (const auto& e : dc.circuit.elements()) stage2.add(e);
  const ModeUnitary u1 = compile(stage1);
  const ModeUnitary u2 = compile(stage2);

  // Encoder stage keeps one photon per port; the target is a spectator.
  const DetectionPattern after_encoder = DetectionPattern::coincidence({"A", "C", "T"});
  DetectionPattern after_dcnot;
  after_dcnot.total_photons = 3;
  const auto& herald = dc.heralds.at(0);
  after_dcnot.required = {DetectionRequirement{herald.detector.port, herald.detector.frame,
                                               herald.accepted.at(0), 1},
                          DetectionRequirement{"C", frames::kLab, std::nullopt, 1},
                          DetectionRequirement{"T", frames::kLab, std::nullopt, 1}};

  const QubitPort control_in = enc.inputs.at(0);
  const QubitPort target_in = dc.inputs.at(1);
  const std::vector<QubitPort> outputs{enc.outputs.at(0), dc.outputs.at(0)};
  const std::vector<QubitPort> spectators{herald.detector};

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  std::vector<double> p_in;
  for (Eigen::Index j = 0; j < 4; ++j) {
    const Eigen::VectorXcd e = basis_vector(4, j);
    PhotonicState s = PhotonicState::vacuum(reg);
    s = prepare(s, LogicalPrep{{control_in, target_in}, {e.data(), e.data() + 4}});
    s = prepare(s, enc.ancillas.at(0));
    s = project(evolve(s, u1), after_encoder);
    s = project(evolve(s, u2), after_dcnot);
    m.col(j) = single_group(logical_readout(s, outputs, spectators), 4);
    p_in.push_back(s.norm_squared());
  }
  LogicalMap lm;
  const auto [pmin, pmax] = std::minmax_element(p_in.begin(), p_in.end());
  lm.probability_spread = *pmax - *pmin;
  lm.success_probability = m.squaredNorm() / 4.0;
  lm.matrix = m;
  lm.deviation_from_ideal =
      (m / std::sqrt(lm.success_probability) - Eigen::MatrixXcd(cnot_matrix())).cwiseAbs().maxCoeff();
  lm.flagged = lm.probability_spread > 1e-10;
  return lm;
}

PhotonicState bell_state(BellLabel label, const ModeRegistry& registry, const QubitPort& first,
                         const QubitPort& second) {
  std::vector<Complex> amps(4, Complex(0.0));
  switch (label) {
    case BellLabel::kPhiPlus:
      amps = {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
      break;
    case BellLabel::kPhiMinus:
      amps = {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};
      break;
    case BellLabel::kPsiPlus:
      amps = {0.0, kInvSqrt2, kInvSqrt2, 0.0};
      break;
    case BellLabel::kPsiMinus:
      amps = {0.0, kInvSqrt2, -kInvSqrt2, 0.0};
      break;
  }
  return prepare(PhotonicState::vacuum(registry), LogicalPrep{{first, second}, amps});
}

PhotonicState isotropic_phi_plus(double visibility, const QubitPort& first,
                                 const QubitPort& second) {
  if (visibility < 0.0 || visibility > 1.0) throw ConfigError("visibility must lie in [0, 1]");
  const ModeRegistry reg({first.port, second.port}, 3);
  const PhotonicState vac = PhotonicState::vacuum(reg);
  auto pair_state = [&](int bit1, int bin1, int bit2, int bin2) {
    std::array<double, 3> in1{}, in2{};
    in1[static_cast<std::size_t>(bin1)] = 1.0;
    in2[static_cast<std::size_t>(bin2)] = 1.0;
    PhotonicState s = apply_creation(
        vac, photon_modes(reg, first.port, first.frame.polarization(bit1).cast<Complex>(), in1));
    return apply_creation(
        s, photon_modes(reg, second.port, second.frame.polarization(bit2).cast<Complex>(), in2));
  };
  const double coherent = std::sqrt(visibility / 2.0);
  const double noise = std::sqrt((1.0 - visibility) / 4.0);
  PhotonicState s = superpose(scaled(pair_state(0, 0, 0, 0), coherent),
                              scaled(pair_state(1, 0, 1, 0), coherent));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      s = superpose(s, scaled(pair_state(i, 1 + i, j, 1 + j), noise));
    }
  }
  return s;
}

double correlation(const Eigen::Matrix4cd& rho, double x_deg, double y_deg) {
  auto analyzer = [](double deg, int sign) {
    const double t = deg * kDeg;
    return sign > 0 ? Eigen::Vector2cd(std::cos(t), std::sin(t))
                    : Eigen::Vector2cd(-std::sin(t), std::cos(t));
  };
  double e = 0.0;
  for (int s : {1, -1}) {
    for (int t : {1, -1}) {
      const Eigen::Vector2cd u = analyzer(x_deg, s);
      const Eigen::Vector2cd w = analyzer(y_deg, t);
      Eigen::Vector4cd uw;
      uw << u(0) * w(0), u(0) * w(1), u(1) * w(0), u(1) * w(1);
      e += s * t * (uw.adjoint() * rho * uw)(0, 0).real();
    }
  }
  return e;
}

double chsh_value(const PhotonicState& state, std::span<const QubitPort> qubits,
                  const ChshAngles& angles) {
  if (qubits.size() != 2) throw Error("CHSH needs exactly two qubit ports");
  return chsh_value(Eigen::Matrix4cd(logical_density(state, qubits)), angles);
}

double chsh_value(const Eigen::Matrix4cd& rho, const ChshAngles& angles) {
  return std::abs(correlation(rho, angles.a, angles.b) - correlation(rho, angles.a, angles.b_prime) +
                  correlation(rho, angles.a_prime, angles.b) +
                  correlation(rho, angles.a_prime, angles.b_prime));
}

}  // namespace pcnot
