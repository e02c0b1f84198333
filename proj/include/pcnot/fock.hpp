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
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pcnot {

using Complex = std::complex<double>;

inline constexpr int kDefaultMaxPhotons = 4;
inline constexpr double kPruneThreshold = 1e-14;

enum class Polarization : std::uint8_t { kH = 0, kV = 1 };

/// Dense indexing of optical modes. Every spatial port carries two
/// polarizations and `internal_bins` orthogonal spectral/temporal bins;
/// the mode index is ((port * 2) + polarization) * bins + bin, so ports
/// come in declaration order, H before V, bins ascending.
class ModeRegistry {
 public:
  struct ModeInfo {
    std::size_t port;
    Polarization polarization;
    int bin;
  };

  explicit ModeRegistry(std::vector<std::string> ports, int internal_bins = 1);

  const std::vector<std::string>& ports() const { return ports_; }
  int internal_bins() const { return bins_; }
  std::size_t num_ports() const { return ports_.size(); }
  std::size_t num_modes() const { return ports_.size() * 2 * static_cast<std::size_t>(bins_); }

  bool has_port(std::string_view label) const;
  /// Throws RegistryError for unknown labels.
  std::size_t port_index(std::string_view label) const;

  std::size_t mode(std::size_t port, Polarization pol, int bin = 0) const;
  std::size_t mode(std::string_view port, Polarization pol, int bin = 0) const {
    return mode(port_index(port), pol, bin);
  }
  ModeInfo describe(std::size_t mode) const;

  /// Same ports, different bin count.
  ModeRegistry with_bins(int internal_bins) const { return ModeRegistry(ports_, internal_bins); }

  bool operator==(const ModeRegistry&) const = default;

 private:
  std::vector<std::string> ports_;
  int bins_;
};

/// Occupation-number vector, one entry per dense mode index.
class FockState {
 public:
  FockState() = default;
  explicit FockState(std::size_t num_modes) : occ_(num_modes, 0) {}
  explicit FockState(std::vector<std::uint8_t> occupations) : occ_(std::move(occupations)) {}

  std::size_t num_modes() const { return occ_.size(); }
  int operator[](std::size_t mode) const { return occ_[mode]; }
  const std::vector<std::uint8_t>& occupations() const { return occ_; }
  int photon_number() const;

  /// Copy with one photon added to / removed from `mode`.
  FockState raised(std::size_t mode) const;
  FockState lowered(std::size_t mode) const;

  auto operator<=>(const FockState&) const = default;
  bool operator==(const FockState&) const = default;

 private:
  std::vector<std::uint8_t> occ_;
};

/// Sparse pure state: Fock basis vector -> amplitude, over one registry.
/// Immutable once built; amplitudes below kPruneThreshold are dropped at
/// construction.
class PhotonicState {
 public:
  using Terms = std::map<FockState, Complex>;

  explicit PhotonicState(ModeRegistry registry, int max_photons = kDefaultMaxPhotons);
  PhotonicState(ModeRegistry registry, Terms terms, int max_photons = kDefaultMaxPhotons,
                double prune_threshold = kPruneThreshold);

  /// The vacuum |0...0> with amplitude 1.
  static PhotonicState vacuum(ModeRegistry registry, int max_photons = kDefaultMaxPhotons);

  const ModeRegistry& registry() const { return registry_; }
  const Terms& terms() const { return terms_; }
  int max_photons() const { return max_photons_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Complex amplitude(const FockState& f) const;
  double norm_squared() const;
  double norm() const;
  /// Distinct photon numbers present among the terms.
  std::set<int> photon_numbers() const;
  /// Probability weight carried by each photon-number sector.
  std::map<int, double> sector_weights() const;

 private:
  ModeRegistry registry_;
  Terms terms_;
  int max_photons_;
};

/// Logical two-qubit input: amplitudes of |0c0t>, |0c1t>, |1c0t>, |1c1t>.
struct InputAmplitudes {
  std::array<Complex, 4> a{Complex(1.0), Complex(0.0), Complex(0.0), Complex(0.0)};

  static InputAmplitudes basis(int control, int target);
  /// Throws ConfigError unless the squared moduli sum to 1 within 1e-10.
  void validate() const;
  std::span<const Complex> view() const { return a; }
};

struct NormalizeResult {
  PhotonicState state;
  double norm;
};

PhotonicState tensor(const PhotonicState& a, const PhotonicState& b);
Complex inner_product(const PhotonicState& a, const PhotonicState& b);
NormalizeResult normalize(const PhotonicState& s);

PhotonicState scaled(const PhotonicState& s, Complex factor);
/// Coherent sum of two states on the same registry.
PhotonicState superpose(const PhotonicState& a, const PhotonicState& b);
/// Keep only terms whose photon number equals `n`.
PhotonicState sector(const PhotonicState& s, int n);

/// Apply the creation operator sum_m c_m a_m^dagger to every term.
/// a^dagger|n> = sqrt(n+1)|n+1>. Throws PhotonCapError past the cap.
PhotonicState apply_creation(const PhotonicState& s,
                             std::span<const std::pair<std::size_t, Complex>> mode_amplitudes);

/// Re-embed a state into a registry with the same ports and at least as
/// many internal bins.
PhotonicState embed(const PhotonicState& s, const ModeRegistry& target);

}  // namespace pcnot
