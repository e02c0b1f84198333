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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pcnot/fit.hpp"
#include "pcnot/gates.hpp"
#include "pcnot/permanent.hpp"
#include "pcnot/runner.hpp"
#include "pcnot/scenario_io.hpp"
#include "pcnot/sources.hpp"

using namespace pcnot;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double max_dev(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Check coincidence_terms() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  const LinearOpticalGate g = cnot_one_ancilla_gate();
  const ModeUnitary u = compile(g.circuit);
  const DetectionPattern all = DetectionPattern::coincidence({"A", "C", "T"});
  const std::vector<QubitPort> q{g.heralds.at(0).detector, g.outputs[0], g.outputs[1]};
  double worst = 0.0, worst_w = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto in = oracle::random_input(rng);
    PhotonicState s = prepare(PhotonicState::vacuum(g.circuit.registry()), LogicalPrep{g.inputs, {in.begin(), in.end()}});
    s = prepare(s, g.ancillas.at(0));
    const PhotonicState out = evolve(s, u);
    const PostSelectOutcome ps = post_select(out, all);
    const auto groups = logical_readout(project(out, all), q);
    if (groups.size() != 1) {
      c.require(false, "coincidence output is not a pure three-qubit state");
      break;
    }
    const Eigen::VectorXcd v = groups.begin()->second;
    worst = std::max(worst, max_dev(v, oracle::one_ancilla_coincidence_amplitudes(in)));
    worst_w = std::max({worst_w, std::abs(v.head(4).squaredNorm() - 0.125),
                        std::abs(v.tail(4).squaredNorm() - 0.125), std::abs(ps.residual_weight - 0.75)});
  }
  const double t = seconds_since(t0);
  c.require(worst < 1e-10, "amplitude deviation " + fmt("%.2e", worst));
  c.require(worst_w < 1e-10, "branch weight deviation " + fmt("%.2e", worst_w));
  c.require(t < 5.0, "runtime " + fmt("%.2f s", t));
  if (c.pass) c.detail = "max amplitude dev " + fmt("%.1e", worst) + ", weight dev " + fmt("%.1e", worst_w) + ", " + fmt("%.2f s", t);
  return c;
}

Check ideal_truth_table() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  Scenario sc;
  const TruthTableReport r = run_truth_table(sc);
  const double t = seconds_since(t0);
  double dev = 0.0, pdev = 0.0;
  for (int in = 0; in < 4; ++in) {
    const int good = (in & 2) | ((in >> 1) ^ (in & 1));
    double row = 0.0;
    for (int out = 0; out < 4; ++out) {
      dev = std::max(dev, std::abs(r.probability[in][out] - (out == good ? 1.0 : 0.0)));
      row += r.joint[in][out];
    }
    pdev = std::max(pdev, std::abs(row - 0.125));
  }
  c.require(dev < 1e-10, "cell deviation " + fmt("%.2e", dev));
  c.require(pdev < 1e-10, "success probability deviation " + fmt("%.2e", pdev));
  c.require(t < 1.0, "runtime " + fmt("%.2f s", t));
  if (c.pass) c.detail = "cell dev " + fmt("%.1e", dev) + ", p = 1/8, " + fmt("%.3f s", t);
  return c;
}

Check feed_forward() {
  Check c;
  const LogicalMap m = extract_logical_map(cnot_one_ancilla_gate(true));
  c.require(std::abs(m.success_probability - 0.25) < 1e-10, "p = " + fmt("%.12f", m.success_probability));
  c.require(m.branch_deviation < 1e-10, "branch maps differ by " + fmt("%.2e", m.branch_deviation));
  c.require(m.deviation_from_ideal < 1e-10, "map deviation " + fmt("%.2e", m.deviation_from_ideal));
  if (c.pass) c.detail = "p = " + fmt("%.12f", m.success_probability) + ", branch dev " + fmt("%.1e", m.branch_deviation);
  return c;
}

Check two_ancilla() {
  Check c;
  const LogicalMap m = extract_logical_map(cnot_two_ancilla_gate());
  c.require(std::abs(m.success_probability - 0.25) < 1e-10, "p = " + fmt("%.12f", m.success_probability));
  c.require(m.deviation_from_ideal < 1e-10, "map deviation " + fmt("%.2e", m.deviation_from_ideal));
  c.require(m.branch_deviation < 1e-10, "branch maps differ");
  if (c.pass) c.detail = "p = " + fmt("%.12f", m.success_probability) + ", map dev " + fmt("%.1e", m.deviation_from_ideal);
  return c;
}

Check entanglement() {
  Check c;
  const LinearOpticalGate g = cnot_one_ancilla_gate();
  const double r = 1.0 / std::sqrt(2.0);
  const std::array<Complex, 4> in{r, 0.0, r, 0.0};
  const GateOutcome out = run_gate(g, in);
  const Eigen::VectorXcd v = output_logical_state(out.combined.conditional_state, g);
  const double fidelity = std::norm(Eigen::Vector4cd(r, 0.0, 0.0, r).dot(v));
  const double s = chsh_value(out.combined.conditional_state, g.outputs);
  c.require(std::abs(fidelity - 1.0) < 1e-10, "fidelity " + fmt("%.12f", fidelity));
  c.require(std::abs(s - 2.0 * std::sqrt(2.0)) < 1e-6, "S = " + fmt("%.9f", s));
  if (c.pass) c.detail = "fidelity " + fmt("%.12f", fidelity) + ", S = " + fmt("%.7f", s);
  return c;
}

Check decomposition() {
  Check c;
  const double d = max_dev(encoder_then_destructive_cnot_map().matrix, extract_logical_map(cnot_one_ancilla_gate()).matrix);
  c.require(d < 1e-10, "map difference " + fmt("%.2e", d));
  if (c.pass) c.detail = "map difference " + fmt("%.1e", d);
  return c;
}

Check permanents() {
  Check c;
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k < 50; ++k) {
      const Eigen::MatrixXcd m = oracle::random_complex(n, rng);
      const Complex want = oracle::naive_permanent(m);
      worst = std::max(worst, std::abs(permanent(m) - want) / std::abs(want));
    }
  }
  const Eigen::MatrixXcd big = oracle::random_unitary(12, rng);
  double best = 1e9;
  volatile double sink = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    sink = sink + std::abs(permanent(big));
    best = std::min(best, seconds_since(t0));
  }
  c.require(worst < 1e-9, "relative error " + fmt("%.2e", worst));
  c.require(best < 0.05, "n = 12 took " + fmt("%.1f ms", best * 1e3));
  if (c.pass) c.detail = "max rel err " + fmt("%.1e", worst) + ", n = 12 in " + fmt("%.2f ms", best * 1e3);
  return c;
}

Check hom_law() {
  Check c;
  Scenario sc;
  sc.experiment = Experiment::kHom;
  sc.sweep.values = {0.0, 0.25, 0.5, 0.85, 0.95, 1.0};
  double worst = 0.0, p_one = 1.0;
  for (const auto& p : run_hom_scan(sc)) {
    worst = std::max(worst, std::abs(p.visibility - p.overlap));
    if (p.overlap == 1.0) p_one = p.coincidence;
  }
  c.require(worst < 1e-10, "visibility deviation " + fmt("%.2e", worst));
  c.require(std::abs(p_one) < 1e-12, "coincidence at s = 1 is " + fmt("%.2e", p_one));
  if (c.pass) c.detail = "max |V - s| " + fmt("%.1e", worst) + ", p(s=1) = " + fmt("%.1e", p_one);
  return c;
}

Check calibrated_imperfection() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  Scenario base;
  base.sources.target.single_photon = false;
  base.experiment = Experiment::kCalibrate;
  base.sweep.target_visibility = 0.615;
  const CalibrationResult cal = calibrate(base, kPaperLikeOverlapAC);

  Scenario sc = base;
  sc.sources.overlap_preset = OverlapPreset::kCustom;
  sc.sources.overlaps = DistinguishabilityConfig(
      {{{"A", "C"}, cal.overlap_ac}, {{"A", "T"}, cal.overlap_t}, {{"C", "T"}, cal.overlap_t}});
  sc.sweep = SweepSettings{};
  sc.experiment = Experiment::kFringe;
  const FringeReport fr = run_fringe(sc);
  sc.experiment = Experiment::kTruthTable;
  const TruthTableReport tt = run_truth_table(sc);
  const double t = seconds_since(t0);
  c.require(fr.fit.visibility >= 0.541 && fr.fit.visibility <= 0.689, "V = " + fmt("%.4f", fr.fit.visibility));
  c.require(tt.error_fraction >= 0.10 && tt.error_fraction <= 0.35, "error fraction " + fmt("%.4f", tt.error_fraction));
  c.require(t < 30.0, "runtime " + fmt("%.1f s", t));
  c.detail = (c.pass ? std::string() : c.detail + "; ") + "overlap_T " + fmt("%.4f", cal.overlap_t) + ", V " +
             fmt("%.4f", fr.fit.visibility) + ", error fraction " + fmt("%.4f", tt.error_fraction) + ", " +
             fmt("%.1f s", t);
  return c;
}

Check statistics() {
  Check c;
  Scenario sc;
  sc.mode = RunMode::kSampled;
  sc.counting.seed = 123;
  const std::string a = run_scenario(sc, OutputFormat::kCsv).text;
  const std::string b = run_scenario(sc, OutputFormat::kCsv).text;
  c.require(a == b, "sampled CSV reruns differ");
  const double sigma = std::sqrt(1e4 * 0.125 * 0.875);
  int outside = 0;
  const std::vector<double> p{0.125};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CountingConfig cc;
    cc.trials_per_setting = 10000;
    cc.seed = seed;
    if (std::abs(static_cast<double>(sample_counts(p, cc)[0]) - 1250.0) > 5 * sigma) ++outside;
  }
  c.require(outside == 0, std::to_string(outside) + " seeds outside 5 sigma");
  if (c.pass) c.detail = "CSV byte-identical, 100/100 seeds within 5 sigma";
  return c;
}

double malus(double a, double phi, double off, double t) {
  const double x = std::cos((t - phi) * M_PI / 180.0);
  return a * x * x + off;
}

Check fits() {
  Check c;
  std::vector<double> th;
  for (int i = 0; i < 37; ++i) th.push_back(5.0 * i);
  std::vector<double> y;
  for (double t : th) y.push_back(malus(0.8, 37.0, 0.15, t));
  const FitResult f = fit_malus(th, y);
  const double err = std::max({std::abs(f.amplitude - 0.8), std::abs(f.offset - 0.15), std::abs(f.phase_deg - 37.0)});
  c.require(err < 1e-6, "noiseless error " + fmt("%.2e", err));
  int covered = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::mt19937_64 rng(500 + rep);
    std::normal_distribution<double> noise(0.0, 0.03);
    std::vector<double> yn, s(th.size(), 0.03);
    for (double t : th) yn.push_back(malus(0.8, 37.0, 0.15, t) + noise(rng));
    const FitResult g = fit_malus(th, yn, s);
    const double dphi = std::fmod(std::abs(g.phase_deg - 37.0), 180.0);
    if (std::abs(g.amplitude - 0.8) <= 3 * g.amplitude_stderr && std::abs(g.offset - 0.15) <= 3 * g.offset_stderr &&
        std::min(dphi, 180.0 - dphi) <= 3 * g.phase_stderr_deg) {
      ++covered;
    }
  }
  c.require(covered >= 190, "coverage " + std::to_string(covered) + "/200");
  if (c.pass) c.detail = "noiseless error " + fmt("%.1e", err) + ", coverage " + std::to_string(covered) + "/200";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"one-ancilla coincidence terms and branch weights", coincidence_terms},
      {"ideal truth table", ideal_truth_table},
      {"feed-forward success 1/4", feed_forward},
      {"two-ancilla CNOT", two_ancilla},
      {"entanglement and CHSH", entanglement},
      {"encoder + destructive CNOT decomposition", decomposition},
      {"permanent engine", permanents},
      {"two-photon interference law", hom_law},
      {"calibrated imperfection", calibrated_imperfection},
      {"statistical layer", statistics},
      {"fit correctness", fits},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("threw: ") + e.what();
    }
    std::printf("%s %2zu. %s: %s\n", c.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), c.detail.c_str());
    if (!c.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
