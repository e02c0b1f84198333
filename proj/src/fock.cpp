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

#include "pcnot/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcnot/errors.hpp"

namespace pcnot {

ModeRegistry::ModeRegistry(std::vector<std::string> ports, int internal_bins)
    : ports_(std::move(ports)), bins_(internal_bins) {
  if (bins_ < 1) {
    throw ConfigError("internal_bins must be >= 1");
  }
  for (std::size_t i = 0; i < ports_.size(); ++i) {
    if (ports_[i].empty()) {
      throw RegistryError("empty port label");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (ports_[i] == ports_[j]) {
        throw RegistryError("duplicate port label '" + ports_[i] + "'");
      }
    }
  }
}

bool ModeRegistry::has_port(std::string_view label) const {
  return std::find(ports_.begin(), ports_.end(), label) != ports_.end();
}

std::size_t ModeRegistry::port_index(std::string_view label) const {
  auto it = std::find(ports_.begin(), ports_.end(), label);
  if (it == ports_.end()) {
    throw RegistryError("unknown port '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - ports_.begin());
}

std::size_t ModeRegistry::mode(std::size_t port, Polarization pol, int bin) const {
  if (port >= ports_.size() || bin < 0 || bin >= bins_) {
    throw RegistryError("mode index out of range");
  }
  return (port * 2 + static_cast<std::size_t>(pol)) * static_cast<std::size_t>(bins_) +
         static_cast<std::size_t>(bin);
}

ModeRegistry::ModeInfo ModeRegistry::describe(std::size_t mode) const {
  const auto b = static_cast<std::size_t>(bins_);
  return ModeInfo{mode / (2 * b), static_cast<Polarization>((mode / b) % 2),
                  static_cast<int>(mode % b)};
}

int FockState::photon_number() const {
  return std::accumulate(occ_.begin(), occ_.end(), 0);
}

FockState FockState::raised(std::size_t mode) const {
  FockState out = *this;
  out.occ_.at(mode) += 1;
  return out;
}

FockState FockState::lowered(std::size_t mode) const {
  FockState out = *this;
  if (out.occ_.at(mode) == 0) {
    throw Error("lowering an empty mode");
  }
  out.occ_[mode] -= 1;
  return out;
}

PhotonicState::PhotonicState(ModeRegistry registry, int max_photons)
    : registry_(std::move(registry)), max_photons_(max_photons) {}

PhotonicState::PhotonicState(ModeRegistry registry, Terms terms, int max_photons,
                             double prune_threshold)
    : registry_(std::move(registry)), max_photons_(max_photons) {
  const std::size_t m = registry_.num_modes();
  for (auto& [fock, amp] : terms) {
    if (fock.num_modes() != m) {
      throw RegistryError("Fock state size does not match registry");
    }
    if (fock.photon_number() > max_photons_) {
      throw PhotonCapError("photon number " + std::to_string(fock.photon_number()) +
                           " exceeds cap " + std::to_string(max_photons_));
    }
    if (std::abs(amp) >= prune_threshold) {
      terms_.emplace_hint(terms_.end(), fock, amp);
    }
  }
}

PhotonicState PhotonicState::vacuum(ModeRegistry registry, int max_photons) {
  Terms t;
  t.emplace(FockState(registry.num_modes()), Complex(1.0));
  return PhotonicState(std::move(registry), std::move(t), max_photons);
}

Complex PhotonicState::amplitude(const FockState& f) const {
  auto it = terms_.find(f);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

double PhotonicState::norm_squared() const {
  double s = 0.0;
  for (const auto& [f, a] : terms_) {
    s += std::norm(a);
  }
  return s;
}

double PhotonicState::norm() const { return std::sqrt(norm_squared()); }

std::set<int> PhotonicState::photon_numbers() const {
  std::set<int> out;
  for (const auto& [f, a] : terms_) {
    out.insert(f.photon_number());
  }
  return out;
}

std::map<int, double> PhotonicState::sector_weights() const {
  std::map<int, double> out;
  for (const auto& [f, a] : terms_) {
    out[f.photon_number()] += std::norm(a);
  }
  return out;
}

InputAmplitudes InputAmplitudes::basis(int control, int target) {
  InputAmplitudes in;
  in.a = {Complex(0.0), Complex(0.0), Complex(0.0), Complex(0.0)};
  in.a.at(static_cast<std::size_t>(2 * control + target)) = 1.0;
  return in;
}

void InputAmplitudes::validate() const {
  double s = 0.0;
  for (const auto& x : a) {
    s += std::norm(x);
  }
  if (std::abs(s - 1.0) > 1e-10) {
    throw ConfigError("input amplitudes are not normalized (sum |a|^2 = " + std::to_string(s) +
                      ")");
  }
}

PhotonicState tensor(const PhotonicState& a, const PhotonicState& b) {
  const auto& ra = a.registry();
  const auto& rb = b.registry();
  std::vector<std::string> ports = ra.ports();
  for (const auto& p : rb.ports()) {
    if (ra.has_port(p)) {
      throw RegistryError("registry conflict: port '" + p + "' appears in both factors");
    }
    ports.push_back(p);
  }
  const int bins = std::max(ra.internal_bins(), rb.internal_bins());
  ModeRegistry out_reg(std::move(ports), bins);

  auto remap = [&](const ModeRegistry& src, std::size_t port_offset, const FockState& f,
                   std::vector<std::uint8_t>& occ) {
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
      if (f[m] == 0) continue;
      const auto info = src.describe(m);
      occ[out_reg.mode(info.port + port_offset, info.polarization, info.bin)] =
          static_cast<std::uint8_t>(f[m]);
    }
  };

  PhotonicState::Terms terms;
  for (const auto& [fa, aa] : a.terms()) {
    for (const auto& [fb, ab] : b.terms()) {
      std::vector<std::uint8_t> occ(out_reg.num_modes(), 0);
      remap(ra, 0, fa, occ);
      remap(rb, ra.num_ports(), fb, occ);
      terms[FockState(std::move(occ))] += aa * ab;
    }
  }
  return PhotonicState(out_reg, std::move(terms), std::max(a.max_photons(), b.max_photons()));
}

Complex inner_product(const PhotonicState& a, const PhotonicState& b) {
  if (!(a.registry() == b.registry())) {
    throw RegistryError("inner product over mismatched registries");
  }
  Complex s(0.0);
  // Walk the smaller map, look up in the larger.
  const bool a_small = a.size() <= b.size();
  const auto& small = a_small ? a : b;
  const auto& large = a_small ? b : a;
  for (const auto& [f, x] : small.terms()) {
    const Complex y = large.amplitude(f);
    s += a_small ? std::conj(x) * y : std::conj(y) * x;
  }
  return s;
}

NormalizeResult normalize(const PhotonicState& s) {
  const double n = s.norm();
  if (!(n > 0.0)) {
    throw ZeroNormError("cannot normalize the zero state");
  }
  return NormalizeResult{scaled(s, Complex(1.0 / n)), n};
}

PhotonicState scaled(const PhotonicState& s, Complex factor) {
  PhotonicState::Terms terms;
  for (const auto& [f, a] : s.terms()) {
    terms.emplace_hint(terms.end(), f, a * factor);
  }
  return PhotonicState(s.registry(), std::move(terms), s.max_photons());
}

PhotonicState superpose(const PhotonicState& a, const PhotonicState& b) {
  if (!(a.registry() == b.registry())) {
    throw RegistryError("superposition over mismatched registries");
  }
  PhotonicState::Terms terms = a.terms();
  for (const auto& [f, x] : b.terms()) {
    terms[f] += x;
  }
  return PhotonicState(a.registry(), std::move(terms), std::max(a.max_photons(), b.max_photons()));
}

PhotonicState sector(const PhotonicState& s, int n) {
  PhotonicState::Terms terms;
  for (const auto& [f, a] : s.terms()) {
    if (f.photon_number() == n) terms.emplace_hint(terms.end(), f, a);
  }
  return PhotonicState(s.registry(), std::move(terms), s.max_photons());
}

PhotonicState apply_creation(const PhotonicState& s,
                             std::span<const std::pair<std::size_t, Complex>> mode_amplitudes) {
  PhotonicState::Terms terms;
  for (const auto& [f, a] : s.terms()) {
    if (f.photon_number() + 1 > s.max_photons()) {
      throw PhotonCapError("creation would exceed photon cap " + std::to_string(s.max_photons()));
    }
    for (const auto& [m, c] : mode_amplitudes) {
      if (c == Complex(0.0)) continue;
      terms[f.raised(m)] += a * c * std::sqrt(static_cast<double>(f[m] + 1));
    }
  }
  return PhotonicState(s.registry(), std::move(terms), s.max_photons());
}

PhotonicState embed(const PhotonicState& s, const ModeRegistry& target) {
  const auto& src = s.registry();
  if (src.ports() != target.ports() || target.internal_bins() < src.internal_bins()) {
    throw RegistryError("cannot embed state into target registry");
  }
  if (src == target) return s;
  PhotonicState::Terms terms;
  for (const auto& [f, a] : s.terms()) {
    std::vector<std::uint8_t> occ(target.num_modes(), 0);
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
      if (f[m] == 0) continue;
      const auto info = src.describe(m);
      occ[target.mode(info.port, info.polarization, info.bin)] = static_cast<std::uint8_t>(f[m]);
    }
    terms.emplace(FockState(std::move(occ)), a);
  }
  return PhotonicState(target, std::move(terms), s.max_photons());
}

}  // namespace pcnot
