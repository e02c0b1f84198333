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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcnot/fit.hpp"
#include "pcnot/gates.hpp"
#include "pcnot/sources.hpp"

namespace pcnot {

enum class Experiment { kTruthTable, kFringe, kHom, kThreePhotonScan, kChsh, kCalibrate };
enum class RunMode { kExact, kSampled };

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

/// Named overlap sets. `paper-like` fixes overlap(A,C) and calibrates the
/// target overlaps so the fringe visibility hits `target_visibility`.
enum class OverlapPreset { kIdeal, kPaperLike, kCustom };

inline constexpr double kPaperLikeOverlapAC = 0.90;
inline constexpr double kPaperLikeTargetVisibility = 0.615;

struct SourceSettings {
  SpdcPairConfig spdc;
  WeakCoherentConfig target{"T", 1e-3, 2, 45.0, true};
  OverlapPreset overlap_preset = OverlapPreset::kIdeal;
  /// Used when the preset is kCustom.
  DistinguishabilityConfig overlaps;
  /// Uncompensated polarization rotation in the ancilla fiber (deg).
  double fiber_rotation_deg = 0.0;
};

struct SweepSettings {
  /// Swept values: target analyzer angles (fringe), overlaps (hom,
  /// three-photon-scan), visibilities (chsh). Empty means the default grid.
  std::vector<double> values;
  /// Logical input angles (cos t|0> + sin t|1>) for fringe and chsh runs.
  double control_input_deg = 45.0;
  double target_input_deg = 0.0;
  /// Logical control analyzer angle held fixed during a fringe.
  double control_analyzer_deg = 0.0;
  /// Calibration target.
  double target_visibility = kPaperLikeTargetVisibility;
};

struct Scenario {
  std::string name = "scenario";
  Experiment experiment = Experiment::kTruthTable;
  std::string preset = "cnot1a";
  /// Replaces the preset's optical elements; roles and frames stay the preset's.
  std::optional<OpticalCircuit> circuit;
  SourceSettings sources;
  SweepSettings sweep;
  CountingConfig counting;
  RunMode mode = RunMode::kExact;
  FitOptions fit;

  void validate() const;
};

/// Overlaps in force for a scenario, running the calibration for paper-like.
DistinguishabilityConfig resolve_overlaps(const Scenario& sc);

struct TruthTableReport {
  /// probability[in][out]: conditional on the coincidence, rows sum to 1.
  /// Index = 2 * control + target.
  std::array<std::array<double, 4>, 4> probability{};
  /// Per-trial coincidence probability of each cell.
  std::array<std::array<double, 4>, 4> joint{};
  std::optional<std::array<std::array<std::uint64_t, 4>, 4>> counts;
  /// Share of the weight (or counts) on the 12 cells a CNOT never populates.
  double error_fraction = 0.0;
  std::vector<std::string> violations;
};

struct FringePoint {
  double theta_deg = 0.0;
  double probability = 0.0;
  std::optional<std::uint64_t> count;
};

struct FringeReport {
  double control_analyzer_deg = 0.0;
  std::vector<FringePoint> points;
  FitResult fit;
  std::vector<std::string> violations;
};

struct HomPoint {
  double overlap = 0.0;
  double coincidence = 0.0;
  double visibility = 0.0;
};

struct ScanPoint {
  double overlap = 0.0;
  double visibility = 0.0;
  double visibility_stderr = 0.0;
};

struct ChshRow {
  std::string label;
  double visibility = 0.0;
  double s_value = 0.0;
};

struct ChshReport {
  ChshAngles angles;
  std::vector<ChshRow> rows;
};

struct CalibrationResult {
  double target_visibility = 0.0;
  double overlap_ac = 0.0;
  double overlap_t = 0.0;
  double achieved_visibility = 0.0;
  int iterations = 0;
};

TruthTableReport run_truth_table(const Scenario& sc);
FringeReport run_fringe(const Scenario& sc);
std::vector<HomPoint> run_hom_scan(const Scenario& sc);
std::vector<ScanPoint> run_three_photon_scan(const Scenario& sc);
ChshReport run_chsh(const Scenario& sc);
/// Bisection for the target-photon overlap (equal with A and C) giving the
/// requested fringe visibility, with overlap(A,C) held at `overlap_ac`.
CalibrationResult calibrate(const Scenario& sc, double overlap_ac = kPaperLikeOverlapAC,
                            double tolerance = 1e-7);

/// Conditional logical density of the gate outputs for the scenario's
/// fringe inputs, herald branches corrected and mixed.
Eigen::Matrix4cd output_density(const Scenario& sc);

/// Fringe visibility for an arbitrary overlap set (exact mode).
double fringe_visibility(const Scenario& sc, const DistinguishabilityConfig& overlaps);

}  // namespace pcnot
