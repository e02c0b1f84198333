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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcnot/fock.hpp"
#include "pcnot/optics.hpp"

namespace pcnot {

/// One detector condition: exactly `count` photons in `port`; if `value` is
/// set, all of them must be found in that logical state of `basis`.
struct DetectionRequirement {
  std::string port;
  LogicalFrame basis;
  std::optional<int> value;  // nullopt accepts either polarization
  int count = 1;
};

/// Post-selection condition on a set of distinct output ports. Detectors
/// are blind to internal bins; photons in unlisted ports are unconstrained.
struct DetectionPattern {
  std::vector<DetectionRequirement> required;
  int total_photons = 3;

  /// One photon in each listed port, any polarization.
  static DetectionPattern coincidence(const std::vector<std::string>& ports);
  void validate(const ModeRegistry& r) const;
};

struct PostSelectOutcome {
  /// Normalized conditional state; has no terms when `empty`.
  PhotonicState conditional_state;
  double success_probability = 0.0;
  /// Weight of terms failing the photon-count part of the pattern
  /// (the part orthogonal to the coincidence condition).
  double residual_weight = 0.0;
  bool empty = true;
};

/// Unnormalized projection onto the pattern.
PhotonicState project(const PhotonicState& s, const DetectionPattern& p);

/// Projection plus renormalization. A zero-probability pattern returns a
/// flagged empty outcome rather than throwing.
PostSelectOutcome post_select(const PhotonicState& s, const DetectionPattern& p);

/// A polarization qubit carried by one photon in `port`.
struct QubitPort {
  std::string port;
  LogicalFrame frame;
};

/// Logical amplitude vectors grouped by everything the qubits do not
/// record (internal bins, other ports). Qubit ports must each hold exactly
/// one photon in every term. `spectators` are rotated into their frames
/// before grouping so that a projected herald photon forms a single group.
/// Bit order: first qubit is the most significant.
std::map<FockState, Eigen::VectorXcd> logical_readout(const PhotonicState& s,
                                                      std::span<const QubitPort> qubits,
                                                      std::span<const QubitPort> spectators = {});

/// Reduced logical density matrix of `qubits`, normalized to unit trace.
Eigen::MatrixXcd logical_density(const PhotonicState& s, std::span<const QubitPort> qubits);

/// Purity tr(rho^2) of one qubit of a two-qubit density matrix.
double reduced_purity(const Eigen::Matrix4cd& rho, int keep_qubit);

}  // namespace pcnot
