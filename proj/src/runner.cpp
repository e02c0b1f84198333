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

#include "pcnot/runner.hpp"

#include <algorithm>
#include <cmath>

#include "pcnot/errors.hpp"

namespace pcnot {
namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

bool is_one_ancilla(const std::string& preset) {
  return preset == "cnot1a" || preset == "cnot1a-ff";
}

bool is_cnot(const std::string& preset) { return is_one_ancilla(preset) || preset == "cnot2a"; }

LinearOpticalGate gate_for(const Scenario& sc) {
  LinearOpticalGate g = is_one_ancilla(sc.preset)
                            ? cnot_one_ancilla_gate(sc.preset == "cnot1a-ff", sc.sources.fiber_rotation_deg)
                            : preset(sc.preset);
  if (sc.circuit) g.circuit = *sc.circuit;
  return g;
}

/// Half-wave plate angle preparing cos t|0> + sin t|1> from H, up to sign.
double plate_for(const LogicalFrame& f, double logical_deg) {
  const double t = logical_deg * kDeg;
  const Eigen::Vector2d v = std::cos(t) * f.polarization(0) + std::sin(t) * f.polarization(1);
  return 0.5 * std::atan2(v(1), v(0)) / kDeg;
}

PhotonicState input_state(const Scenario& sc, const LinearOpticalGate& g,
                          const DistinguishabilityConfig& overlaps, double control_deg,
                          double target_deg) {
  if (is_one_ancilla(sc.preset)) {
    SpdcPairConfig spdc = sc.sources.spdc;
    spdc.control_plate_deg = plate_for(g.inputs.at(0).frame, control_deg);
    WeakCoherentConfig wcs = sc.sources.target;
    wcs.plate_deg = plate_for(g.inputs.at(1).frame, target_deg);
    return build_input_state(spdc, wcs, overlaps, g.circuit.registry().ports());
  }
  if (!overlaps.ideal() || !sc.sources.target.single_photon) {
    throw ConfigError("preset '" + sc.preset + "' runs with ideal single-photon sources only");
  }
  if (g.inputs.size() != 2) throw ConfigError("preset '" + sc.preset + "' is not a two-qubit gate");
  const double c = control_deg * kDeg;
  const double t = target_deg * kDeg;
  const std::vector<Complex> amps{std::cos(c) * std::cos(t), std::cos(c) * std::sin(t),
                                  std::sin(c) * std::cos(t), std::sin(c) * std::sin(t)};
  PhotonicState s = prepare(PhotonicState::vacuum(g.circuit.registry()), LogicalPrep{g.inputs, amps});
  for (const auto& anc : g.ancillas) s = prepare(s, anc);
  return s;
}

PhotonicState evolved_input(const Scenario& sc, const LinearOpticalGate& g,
                            const DistinguishabilityConfig& overlaps, double control_deg,
                            double target_deg) {
  const PhotonicState s = input_state(sc, g, overlaps, control_deg, target_deg);
  return evolve(s, compile(g.circuit, s.registry()));
}

/// Coincidence probability with logical output analyzers, summed over the
/// accepted herald outcomes with their corrections folded into the analyzers.
double gated_probability(const LinearOpticalGate& g, const PhotonicState& evolved,
                         const std::vector<double>& output_deg) {
  std::vector<std::string> ports;
  AnalyzerSettings base;
  for (const auto& h : g.heralds) {
    ports.push_back(h.detector.port);
    base.frames[h.detector.port] = h.detector.frame;
  }
  for (const auto& q : g.outputs) {
    ports.push_back(q.port);
    base.frames[q.port] = q.frame;
  }
  const DetectionPattern pattern = DetectionPattern::coincidence(ports);
  double p = 0.0;
  for (const auto& outcome : herald_outcomes(g)) {
    AnalyzerSettings an = base;
    for (std::size_t i = 0; i < g.heralds.size(); ++i) {
      an.angles_deg[g.heralds[i].detector.port] = 90.0 * outcome[i];
    }
    for (std::size_t i = 0; i < g.outputs.size(); ++i) {
      const auto& port = g.outputs[i].port;
      an.angles_deg[port] = corrected_analyzer_deg(g, outcome, port, output_deg.at(i));
    }
    p += detection_probability(evolved, an, pattern);
  }
  return p;
}

std::vector<double> default_grid(double lo, double hi, int points) {
  std::vector<double> v;
  for (int i = 0; i < points; ++i) v.push_back(lo + (hi - lo) * i / (points - 1));
  return v;
}

std::vector<double> fringe_angles(const Scenario& sc) {
  return sc.sweep.values.empty() ? default_grid(0.0, 180.0, 13) : sc.sweep.values;
}

std::vector<double> fringe_probabilities(const Scenario& sc, const DistinguishabilityConfig& overlaps,
                                         const std::vector<double>& thetas) {
  const LinearOpticalGate g = gate_for(sc);
  const PhotonicState evolved =
      evolved_input(sc, g, overlaps, sc.sweep.control_input_deg, sc.sweep.target_input_deg);
  std::vector<double> probs;
  for (double th : thetas) probs.push_back(gated_probability(g, evolved, {sc.sweep.control_analyzer_deg, th}));
  return probs;
}

DistinguishabilityConfig target_overlaps(double overlap_ac, double overlap_t) {
  return DistinguishabilityConfig({{{"A", "C"}, overlap_ac}, {{"A", "T"}, overlap_t}, {{"C", "T"}, overlap_t}});
}

void require_cnot(const Scenario& sc) {
  if (!is_cnot(sc.preset)) {
    throw ConfigError("experiment needs a CNOT preset, got '" + sc.preset + "'");
  }
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kTruthTable:
      return "truth-table";
    case Experiment::kFringe:
      return "fringe";
    case Experiment::kHom:
      return "hom";
    case Experiment::kThreePhotonScan:
      return "three-photon-scan";
    case Experiment::kChsh:
      return "chsh";
    case Experiment::kCalibrate:
      return "calibrate";
  }
  return "";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::kTruthTable, Experiment::kFringe, Experiment::kHom,
                 Experiment::kThreePhotonScan, Experiment::kChsh, Experiment::kCalibrate}) {
    if (experiment_name(e) == name) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

void Scenario::validate() const {
  const LinearOpticalGate g = pcnot::preset(this->preset);
  if (circuit && circuit->registry().ports() != g.circuit.registry().ports()) {
    throw ConfigError("explicit circuit must use the ports of preset '" + this->preset + "'");
  }
  sources.target.validate();
  counting.validate();
  if (sources.overlap_preset == OverlapPreset::kPaperLike && !is_one_ancilla(this->preset)) {
    throw ConfigError("paper-like overlaps need a one-ancilla CNOT preset");
  }
}

DistinguishabilityConfig resolve_overlaps(const Scenario& sc) {
  switch (sc.sources.overlap_preset) {
    case OverlapPreset::kIdeal:
      return DistinguishabilityConfig{};
    case OverlapPreset::kCustom:
      return sc.sources.overlaps;
    case OverlapPreset::kPaperLike: {
      Scenario cal = sc;
      cal.sweep = SweepSettings{};
      const CalibrationResult r = calibrate(cal, kPaperLikeOverlapAC);
      return target_overlaps(r.overlap_ac, r.overlap_t);
    }
  }
  return DistinguishabilityConfig{};
}

TruthTableReport run_truth_table(const Scenario& sc) {
  sc.validate();
  require_cnot(sc);
  const LinearOpticalGate g = gate_for(sc);
  const DistinguishabilityConfig overlaps = resolve_overlaps(sc);
  TruthTableReport rep;
  for (int in = 0; in < 4; ++in) {
    const int c = in >> 1, t = in & 1;
    const PhotonicState evolved = evolved_input(sc, g, overlaps, 90.0 * c, 90.0 * t);
    double row = 0.0;
    for (int out = 0; out < 4; ++out) {
      const double p = gated_probability(g, evolved, {90.0 * (out >> 1), 90.0 * (out & 1)});
      rep.joint[in][out] = p;
      row += p;
    }
    if (!(row > 0.0)) {
      rep.violations.push_back("input " + std::to_string(in) + " never produces a coincidence");
      continue;
    }
    if (row > 1.0 + 1e-10) rep.violations.push_back("coincidence probability above 1");
    for (int out = 0; out < 4; ++out) rep.probability[in][out] = rep.joint[in][out] / row;
  }

  auto correct = [](int in, int out) { return out == ((in & 2) | ((in >> 1) ^ (in & 1))); };
  if (sc.mode == RunMode::kExact) {
    double wrong = 0.0;
    for (int in = 0; in < 4; ++in) {
      double sum = 0.0;
      for (int out = 0; out < 4; ++out) {
        sum += rep.probability[in][out];
        if (!correct(in, out)) wrong += rep.probability[in][out];
      }
      if (std::abs(sum - 1.0) > 1e-10) rep.violations.push_back("conditional row does not sum to 1");
    }
    rep.error_fraction = wrong / 4.0;
  } else {
    std::vector<double> flat;
    for (const auto& r : rep.joint) flat.insert(flat.end(), r.begin(), r.end());
    const auto drawn = sample_counts(flat, sc.counting);
    std::array<std::array<std::uint64_t, 4>, 4> counts{};
    std::uint64_t total = 0, wrong = 0;
    for (int in = 0; in < 4; ++in) {
      for (int out = 0; out < 4; ++out) {
        counts[in][out] = drawn[static_cast<std::size_t>(4 * in + out)];
        total += counts[in][out];
        if (!correct(in, out)) wrong += counts[in][out];
      }
    }
    rep.counts = counts;
    rep.error_fraction = total > 0 ? static_cast<double>(wrong) / static_cast<double>(total) : 0.0;
  }
  return rep;
}

FringeReport run_fringe(const Scenario& sc) {
  sc.validate();
  require_cnot(sc);
  FringeReport rep;
  rep.control_analyzer_deg = sc.sweep.control_analyzer_deg;
  const std::vector<double> thetas = fringe_angles(sc);
  const std::vector<double> probs = fringe_probabilities(sc, resolve_overlaps(sc), thetas);
  for (std::size_t i = 0; i < thetas.size(); ++i) rep.points.push_back(FringePoint{thetas[i], probs[i], std::nullopt});

  if (sc.mode == RunMode::kExact) {
    rep.fit = fit_malus(thetas, probs, {}, sc.fit);
  } else {
    const auto counts = sample_counts(probs, sc.counting);
    std::vector<double> y, sigma;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      rep.points[i].count = counts[i];
      y.push_back(static_cast<double>(counts[i]));
      sigma.push_back(std::sqrt(std::max<double>(static_cast<double>(counts[i]), 1.0)));
    }
    rep.fit = fit_malus(thetas, y, sigma, sc.fit);
  }
  if (!rep.fit.converged) rep.violations.push_back("fringe fit: " + rep.fit.diagnostics);
  const double slack = 3.0 * rep.fit.visibility_stderr + 1e-9;
  if (rep.fit.visibility < -slack || rep.fit.visibility > 1.0 + slack) {
    rep.violations.push_back("fitted visibility outside [0, 1 + 3 stderr]");
  }
  return rep;
}

std::vector<HomPoint> run_hom_scan(const Scenario& sc) {
  const std::vector<double> grid = sc.sweep.values.empty() ? default_grid(0.0, 1.0, 11) : sc.sweep.values;
  OpticalCircuit splitter(ModeRegistry({"A", "C"}));
  splitter.add(BeamSplitter{0.5}, {"A", "C"});
  const DetectionPattern both = DetectionPattern::coincidence({"A", "C"});
  std::vector<HomPoint> out;
  for (double s : grid) {
    const PhotonicState st = build_photons({{"A", 0.0, "A"}, {"C", 0.0, "C"}},
                                           DistinguishabilityConfig({{{"A", "C"}, s}}), {"A", "C"});
    const double p = coincidence_probability(st, splitter, AnalyzerSettings{}, both);
    out.push_back(HomPoint{s, p, 1.0 - 2.0 * p});
  }
  return out;
}

double fringe_visibility(const Scenario& sc, const DistinguishabilityConfig& overlaps) {
  const std::vector<double> thetas = fringe_angles(sc);
  const FitResult f = fit_malus(thetas, fringe_probabilities(sc, overlaps, thetas), {}, sc.fit);
  return f.visibility;
}

std::vector<ScanPoint> run_three_photon_scan(const Scenario& sc) {
  sc.validate();
  if (!is_one_ancilla(sc.preset)) throw ConfigError("three-photon scan needs a one-ancilla CNOT preset");
  const double s_ac = sc.sources.overlap_preset == OverlapPreset::kPaperLike
                          ? kPaperLikeOverlapAC
                          : resolve_overlaps(sc).overlap("A", "C");
  const double s_max = std::min(1.0, max_equal_overlap(s_ac));
  Scenario fr = sc;
  fr.sweep.values.clear();
  std::vector<ScanPoint> out;
  for (double s : sc.sweep.values.empty() ? default_grid(0.0, s_max, 11) : sc.sweep.values) {
    const std::vector<double> thetas = fringe_angles(fr);
    const FitResult f = fit_malus(thetas, fringe_probabilities(fr, target_overlaps(s_ac, s), thetas), {}, fr.fit);
    out.push_back(ScanPoint{s, f.visibility, f.visibility_stderr});
  }
  return out;
}

CalibrationResult calibrate(const Scenario& sc, double overlap_ac, double tolerance) {
  if (!is_one_ancilla(sc.preset)) throw ConfigError("calibration needs a one-ancilla CNOT preset");
  CalibrationResult r;
  r.target_visibility = sc.sweep.target_visibility;
  r.overlap_ac = overlap_ac;
  Scenario fr = sc;
  fr.sweep.values.clear();
  auto vis = [&](double s) { return fringe_visibility(fr, target_overlaps(overlap_ac, s)); };
  double lo = 0.0, hi = std::min(1.0, max_equal_overlap(overlap_ac));
  const double v_lo = vis(lo), v_hi = vis(hi);
  if (r.target_visibility < v_lo || r.target_visibility > v_hi) {
    throw ConfigError("target visibility is outside the reachable range [" + std::to_string(v_lo) +
                      ", " + std::to_string(v_hi) + "]");
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (vis(mid) < r.target_visibility ? lo : hi) = mid;
    ++r.iterations;
  }
  r.overlap_t = 0.5 * (lo + hi);
  r.achieved_visibility = vis(r.overlap_t);
  return r;
}

Eigen::Matrix4cd output_density(const Scenario& sc) {
  sc.validate();
  const LinearOpticalGate g = gate_for(sc);
  if (g.outputs.size() != 2) throw ConfigError("output density needs a two-qubit output");
  const PhotonicState evolved = evolved_input(sc, g, resolve_overlaps(sc), sc.sweep.control_input_deg,
                                              sc.sweep.target_input_deg);
  std::vector<QubitPort> spectators;
  for (const auto& h : g.heralds) spectators.push_back(h.detector);
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto& outcome : herald_outcomes(g)) {
    const PhotonicState branch = apply_feed_forward(g, outcome, project(evolved, branch_pattern(g, outcome)));
    for (const auto& [env, v] : logical_readout(branch, g.outputs, spectators)) rho += v * v.adjoint();
  }
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw ZeroNormError("gate never fires for this input");
  return rho / tr;
}

ChshReport run_chsh(const Scenario& sc) {
  sc.validate();
  require_cnot(sc);
  ChshReport rep;
  const DistinguishabilityConfig overlaps = resolve_overlaps(sc);
  Scenario fixed = sc;
  fixed.sources.overlap_preset = OverlapPreset::kCustom;
  fixed.sources.overlaps = overlaps;
  Scenario fr = fixed;
  fr.sweep.values.clear();
  rep.rows.push_back(ChshRow{sc.preset, fringe_visibility(fr, overlaps), chsh_value(output_density(fixed), rep.angles)});

  const QubitPort first{"C", frames::kLab}, second{"T", frames::kLab};
  const std::vector<QubitPort> qubits{first, second};
  for (double v : sc.sweep.values.empty() ? std::vector<double>{1.0, kPaperLikeTargetVisibility, 0.71}
                                          : sc.sweep.values) {
    rep.rows.push_back(ChshRow{"isotropic", v, chsh_value(isotropic_phi_plus(v, first, second), qubits, rep.angles)});
  }
  return rep;
}

}  // namespace pcnot
