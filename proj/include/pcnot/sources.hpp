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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pcnot/detection.hpp"
#include "pcnot/fock.hpp"
#include "pcnot/optics.hpp"

namespace pcnot {

/// Photon pair from down-conversion: one photon into each of two ports,
/// each starting horizontal and prepared by a half-wave plate.
struct SpdcPairConfig {
  std::string ancilla_port = "A";
  std::string control_port = "C";
  double ancilla_plate_deg = 22.5;
  double control_plate_deg = 0.0;
};

/// Attenuated laser pulse on the target port. Sectors n = 1..max_photons are
/// kept with Poisson weights renormalized over non-empty pulses, since only
/// events where the target port fires survive the coincidence condition.
struct WeakCoherentConfig {
  std::string port = "T";
  double mean_photon_number = 1e-3;
  int max_photons = 2;
  double plate_deg = 45.0;
  /// Replace the pulse by an exact single photon.
  bool single_photon = false;

  void validate() const;
  /// e^-mu mu^n / n!
  double poisson(int n) const;
  /// Weight of sector n in 1..max_photons, conditioned on n >= 1.
  std::vector<double> sector_weights() const;
  /// Conditioned weight of the dropped sectors n > max_photons.
  double truncated_tail() const;
};

/// Squared internal-state overlaps between labelled photons. Unlisted pairs
/// are fully indistinguishable.
class DistinguishabilityConfig {
 public:
  DistinguishabilityConfig() = default;
  /// Validates ranges and positive semidefiniteness of the implied Gram matrix.
  explicit DistinguishabilityConfig(std::map<std::pair<std::string, std::string>, double> overlaps);

  double overlap(const std::string& a, const std::string& b) const;
  const std::map<std::pair<std::string, std::string>, double>& pairs() const { return overlaps_; }
  bool ideal() const;

  /// Gram matrix of internal states, G_ij = sqrt(s_ij) (real, non-negative
  /// inner products).
  Eigen::MatrixXd gram(const std::vector<std::string>& labels) const;
  /// Internal state of each label over an orthonormal bin basis, from a
  /// pivot-free Cholesky that skips dependent directions. The first label
  /// occupies bin 0; the bin count equals the Gram rank.
  std::vector<std::vector<double>> internal_states(const std::vector<std::string>& labels) const;

 private:
  std::map<std::pair<std::string, std::string>, double> overlaps_;
};

/// Largest overlap of the third photon with the other two (taken equal)
/// that keeps the Gram matrix positive semidefinite.
double max_equal_overlap(double overlap_first_pair);

/// Analyzer angles per port. Logical angles select cos t|0> + sin t|1> in the
/// port's frame; physical angles select linear polarization at t from H.
struct AnalyzerSettings {
  std::map<std::string, double> angles_deg;
  bool logical = true;
  std::map<std::string, LogicalFrame> frames;

  /// Pass direction in (H, V); throws ConfigError for a port with no angle.
  Eigen::Vector2d pass_direction(const std::string& port) const;
};

struct CountingConfig {
  std::uint64_t trials_per_setting = 100000;
  double detector_efficiency = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PhotonSpec {
  std::string port;
  double plate_deg = 0.0;
  /// Key into the distinguishability overlaps.
  std::string label;
};

/// One photon per spec, horizontally polarized then passed through a
/// half-wave plate, with internal states from the overlaps. `ports` fixes the
/// registry port order; empty means the order of first appearance.
PhotonicState build_photons(const std::vector<PhotonSpec>& photons, const DistinguishabilityConfig& d,
                            std::vector<std::string> ports = {});

/// Pair plus target pulse. Photon labels are the port names.
PhotonicState build_input_state(const SpdcPairConfig& spdc, const WeakCoherentConfig& wcs,
                                const DistinguishabilityConfig& d,
                                std::vector<std::string> ports = {});

/// Probability that every port in `pattern.required` fires after the
/// analyzers. Threshold detectors: a port fires when at least one photon
/// passes its polarizer; each passing photon is detected with probability
/// `efficiency`. Ports without an analyzer angle have no polarizer. Internal
/// bins are not resolved.
double detection_probability(const PhotonicState& evolved, const AnalyzerSettings& analyzers,
                             const DetectionPattern& pattern, double efficiency = 1.0);

double coincidence_probability(const PhotonicState& state, const OpticalCircuit& circuit,
                               const AnalyzerSettings& analyzers, const DetectionPattern& pattern,
                               double efficiency = 1.0);

/// Binomial(trials, p * efficiency^3) per entry, drawn in order from one
/// generator seeded with `counting.seed`.
std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities,
                                         const CountingConfig& counting);

}  // namespace pcnot
