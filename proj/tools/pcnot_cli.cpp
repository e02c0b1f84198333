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

// Command-line front end: one subcommand per experiment plus `run` for
// scenario files.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcnot/errors.hpp"
#include "pcnot/scenario_io.hpp"

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  double efficiency = 1.0;
  bool exact = false;
  bool sampled = false;
  std::string preset = "cnot1a";
  std::string overlaps = "ideal";
  std::string target = "auto";
  double mean_photon_number = 1e-3;
  std::string output;
  std::string format = "csv";
  bool free_period = false;
  std::vector<double> values;
  double control_analyzer_deg = 0.0;
  double target_visibility = pcnot::kPaperLikeTargetVisibility;
  std::string scenario_file;
};

pcnot::Scenario scenario_from_flags(const Options& o, pcnot::Experiment e) {
  pcnot::Scenario sc;
  sc.name = pcnot::experiment_name(e);
  sc.experiment = e;
  sc.preset = o.preset;
  sc.mode = o.sampled ? pcnot::RunMode::kSampled : pcnot::RunMode::kExact;
  sc.counting.seed = o.seed;
  sc.counting.trials_per_setting = o.trials;
  sc.counting.detector_efficiency = o.efficiency;
  sc.fit.free_period = o.free_period;
  sc.sweep.values = o.values;
  sc.sweep.control_analyzer_deg = o.control_analyzer_deg;
  sc.sweep.target_visibility = o.target_visibility;

  if (o.overlaps == "ideal") {
    sc.sources.overlap_preset = pcnot::OverlapPreset::kIdeal;
  } else if (o.overlaps == "paper-like") {
    sc.sources.overlap_preset = pcnot::OverlapPreset::kPaperLike;
  } else {
    sc.sources.overlap_preset = pcnot::OverlapPreset::kCustom;
    sc.sources.overlaps = pcnot::load_overlap_file(o.overlaps);
  }
  const bool pulse = o.target == "weak-coherent" ||
                     (o.target == "auto" && (sc.sources.overlap_preset == pcnot::OverlapPreset::kPaperLike ||
                                             e == pcnot::Experiment::kCalibrate));
  sc.sources.target.single_photon = !pulse;
  sc.sources.target.mean_photon_number = o.mean_photon_number;
  sc.validate();
  return sc;
}

int emit(const pcnot::Scenario& sc, const Options& o) {
  const auto format = o.format == "json" ? pcnot::OutputFormat::kJson : pcnot::OutputFormat::kCsv;
  const pcnot::RunOutput out = pcnot::run_scenario(sc, format);
  if (o.output.empty()) {
    std::cout << out.text;
  } else {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw pcnot::ConfigError("cannot write '" + o.output + "'");
    f << out.text;
  }
  for (const auto& v : out.violations) std::cerr << "invariant violated: " << v << '\n';
  return out.violations.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-optics CNOT gate simulator"};
  app.require_subcommand(1);
  Options o;

  auto* exact = app.add_flag("--exact", o.exact, "Report exact probabilities (default)");
  auto* sampled = app.add_flag("--sampled", o.sampled, "Report seeded binomial counts");
  exact->excludes(sampled);
  auto* seed = app.add_option("--seed", o.seed, "Sampling seed");
  auto* trials = app.add_option("--trials", o.trials, "Trials per setting");
  auto* eff = app.add_option("--efficiency", o.efficiency, "Detector efficiency in (0, 1]");
  app.add_option("--preset", o.preset, "Gate preset")->check(CLI::IsMember(pcnot::preset_names()));
  app.add_option("--overlaps", o.overlaps, "ideal, paper-like, or a JSON overlap file");
  app.add_option("--target", o.target, "Target source")
      ->check(CLI::IsMember({"auto", "single-photon", "weak-coherent"}));
  app.add_option("--mean-photon-number", o.mean_photon_number, "Weak coherent mean photon number");
  app.add_option("--output", o.output, "Write to a file instead of stdout");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  auto* free_period = app.add_flag("--free-period", o.free_period, "Fit the fringe period too");
  app.add_option("--values", o.values, "Sweep values (angles, overlaps or visibilities)");
  app.add_option("--control-analyzer", o.control_analyzer_deg, "Fringe control analyzer, logical deg");
  app.add_option("--target-visibility", o.target_visibility, "Calibration target visibility");

  struct Sub {
    const char* name;
    const char* help;
    pcnot::Experiment experiment;
  };
  const std::vector<Sub> subs{
      {"truth-table", "Basis inputs against logical analyzer pairs", pcnot::Experiment::kTruthTable},
      {"fringe", "Target-analyzer fringe with a superposed control", pcnot::Experiment::kFringe},
      {"hom", "Two-photon coincidence against overlap", pcnot::Experiment::kHom},
      {"three-photon-scan", "Gated fringe visibility against target overlap",
       pcnot::Experiment::kThreePhotonScan},
      {"chsh", "CHSH value of the gate output", pcnot::Experiment::kChsh},
      {"calibrate", "Fit the target overlap to a fringe visibility", pcnot::Experiment::kCalibrate},
  };
  std::vector<CLI::App*> sub_apps;
  for (const auto& s : subs) sub_apps.push_back(app.add_subcommand(s.name, s.help)->fallthrough());
  auto* run = app.add_subcommand("run", "Run a scenario file")->fallthrough();
  run->add_option("scenario", o.scenario_file, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      pcnot::Scenario sc = pcnot::load_scenario(o.scenario_file);
      if (*seed) sc.counting.seed = o.seed;
      if (*trials) sc.counting.trials_per_setting = o.trials;
      if (*eff) sc.counting.detector_efficiency = o.efficiency;
      if (*sampled) sc.mode = pcnot::RunMode::kSampled;
      if (*exact) sc.mode = pcnot::RunMode::kExact;
      if (*free_period) sc.fit.free_period = true;
      sc.validate();
      return emit(sc, o);
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (*sub_apps[i]) return emit(scenario_from_flags(o, subs[i].experiment), o);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
