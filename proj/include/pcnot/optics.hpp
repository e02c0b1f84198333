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

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pcnot/fock.hpp"

namespace pcnot {

// Element kinds. All angles are in degrees.

/// Symmetric splitter [[sqrt(T), i sqrt(R)], [i sqrt(R), sqrt(T)]] on two
/// ports, applied to each polarization and bin.
struct BeamSplitter {
  double reflectivity = 0.5;
};

/// Transmits linear polarization at `basis_angle_deg`, reflects the
/// orthogonal one. At 0 deg, V goes first->second port with +1 and
/// second->first with -1. Other angles are built as
/// BasisRotator(angle) -> PolarizingBS(0) -> BasisRotator(-angle).
struct PolarizingBS {
  double basis_angle_deg = 0.0;
};

/// Half-wave plate with fast axis at `angle_deg`:
/// Jones matrix [[cos 2a, sin 2a], [sin 2a, -cos 2a]] on (H, V).
struct WavePlate {
  double angle_deg = 0.0;
};

/// Passive rotation of the polarization reference frame by `angle_deg`
/// (a fiber polarization controller): [[c, s], [-s, c]] on (H, V).
struct BasisRotator {
  double angle_deg = 0.0;
};

struct PhaseShifter {
  double phase_deg = 0.0;
};

/// Projector onto linear polarization `angle_deg`. Not unitary; only valid
/// as a detection-stage analyzer.
struct Polarizer {
  double angle_deg = 0.0;
};

using ElementKind =
    std::variant<BeamSplitter, PolarizingBS, WavePlate, BasisRotator, PhaseShifter, Polarizer>;

struct OpticalElement {
  ElementKind kind;
  std::vector<std::string> ports;
};

std::string element_name(const ElementKind& kind);

/// Single-photon transfer matrix: column = input mode, row = output mode.
struct ModeUnitary {
  ModeRegistry registry;
  Eigen::MatrixXcd matrix;

  static ModeUnitary identity(const ModeRegistry& registry);
  /// max |(U^dagger U - I)_ij|
  double unitarity_deviation() const;
};

class OpticalCircuit {
 public:
  explicit OpticalCircuit(ModeRegistry registry) : registry_(std::move(registry)) {}

  OpticalCircuit& add(ElementKind kind, std::vector<std::string> ports);
  OpticalCircuit& add(OpticalElement e);

  const ModeRegistry& registry() const { return registry_; }
  const std::vector<OpticalElement>& elements() const { return elements_; }

 private:
  ModeRegistry registry_;
  std::vector<OpticalElement> elements_;
};

/// Throws RegistryError for unknown ports or the wrong port count, and
/// NonUnitaryElementError for a Polarizer.
ModeUnitary element_unitary(const OpticalElement& e, const ModeRegistry& r);

/// Ordered product: the first element acts first.
ModeUnitary compile(const OpticalCircuit& c);
/// Compile against a registry with the circuit's ports but a different
/// number of internal bins.
ModeUnitary compile(const OpticalCircuit& c, const ModeRegistry& r);

/// Multi-photon evolution. For input pattern S and output pattern T the
/// transition amplitude is perm(U[T, S]) / sqrt(prod S_i! prod T_j!).
/// Output patterns are enumerated from the column supports of U, so sparse
/// circuits and local operations stay cheap.
PhotonicState evolve(const PhotonicState& s, const ModeUnitary& u);

/// Embed a 2x2 polarization matrix on one port, identity elsewhere.
ModeUnitary port_polarization_unitary(const ModeRegistry& r, std::string_view port,
                                      const Eigen::Matrix2cd& jones);

/// Jones matrices of the unitary element kinds.
Eigen::Matrix2d wave_plate_jones(double angle_deg);
Eigen::Matrix2d basis_rotator_jones(double angle_deg);

/// Logical qubit frame of one port: the linear polarization angles that
/// encode |0> and |1>. `one_deg` must differ from `zero_deg` by +-90 deg,
/// so left-handed frames (|1> = -V with |0> = H) are expressible.
/// This is the single place logical values are mapped onto polarizations.
struct LogicalFrame {
  double zero_deg = 0.0;
  double one_deg = 90.0;

  /// Right-handed frame with |0> at `deg`.
  static LogicalFrame rotated(double deg) { return LogicalFrame{deg, deg + 90.0}; }

  /// Physical (H, V) vector of logical |bit>.
  Eigen::Vector2d polarization(int bit) const;
  /// Analyzer pass direction cos(t)|0> + sin(t)|1>.
  Eigen::Vector2d analyzer(double theta_deg) const;
  /// Rows are <0| and <1| in (H, V) coordinates; maps physical to logical.
  Eigen::Matrix2d to_logical() const;
  /// Half-wave plate angle implementing logical X in this frame.
  double bit_flip_plate_deg() const { return 0.5 * (zero_deg + one_deg); }
  /// Half-wave plate angle implementing logical Z in this frame.
  double phase_flip_plate_deg() const { return zero_deg; }
  /// Half-wave plate angle that turns H into |bit> exactly (sign included).
  double preparation_plate_deg(int bit) const;

  void validate() const;
};

/// Local unitary on the listed ports turning each frame's |0>,|1> into the
/// H,V slots. Evolving by it lets logical values be read off Fock keys.
ModeUnitary frame_alignment(const ModeRegistry& r,
                            const std::vector<std::pair<std::string, LogicalFrame>>& frames);

/// Creation-operator amplitudes for one photon on `port` with polarization
/// `pol` (H, V components) and internal state `internal` (one amplitude per
/// bin, missing bins are zero).
std::vector<std::pair<std::size_t, Complex>> photon_modes(const ModeRegistry& r,
                                                          std::string_view port,
                                                          const Eigen::Vector2cd& pol,
                                                          std::span<const double> internal = {});

}  // namespace pcnot
