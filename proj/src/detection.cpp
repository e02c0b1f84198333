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

#include "pcnot/detection.hpp"

#include <set>

#include "pcnot/errors.hpp"

namespace pcnot {
namespace {

int port_count(const FockState& f, const ModeRegistry& r, std::size_t port) {
  int n = 0;
  for (int b = 0; b < r.internal_bins(); ++b) {
    n += f[r.mode(port, Polarization::kH, b)] + f[r.mode(port, Polarization::kV, b)];
  }
  return n;
}

int slot_count(const FockState& f, const ModeRegistry& r, std::size_t port, Polarization pol) {
  int n = 0;
  for (int b = 0; b < r.internal_bins(); ++b) n += f[r.mode(port, pol, b)];
  return n;
}

bool meets_counts(const FockState& f, const ModeRegistry& r, const DetectionPattern& p) {
  if (f.photon_number() != p.total_photons) return false;
  for (const auto& req : p.required) {
    if (port_count(f, r, r.port_index(req.port)) != req.count) return false;
  }
  return true;
}

}  // namespace

DetectionPattern DetectionPattern::coincidence(const std::vector<std::string>& ports) {
  DetectionPattern p;
  p.total_photons = static_cast<int>(ports.size());
  for (const auto& port : ports) {
    p.required.push_back(DetectionRequirement{port, LogicalFrame{}, std::nullopt, 1});
  }
  return p;
}

void DetectionPattern::validate(const ModeRegistry& r) const {
  std::set<std::string> seen;
  for (const auto& req : required) {
    r.port_index(req.port);
    if (!seen.insert(req.port).second) {
      throw ConfigError("detection pattern lists port '" + req.port + "' twice");
    }
    if (req.count < 0) throw ConfigError("negative required photon count");
    if (req.value && (*req.value < 0 || *req.value > 1)) {
      throw ConfigError("logical value must be 0 or 1");
    }
    req.basis.validate();
  }
  if (total_photons < 0) throw ConfigError("negative total photon number");
}

PhotonicState project(const PhotonicState& s, const DetectionPattern& p) {
  const auto& r = s.registry();
  p.validate(r);
  if (!s.photon_numbers().contains(p.total_photons)) {
    throw ConfigError("pattern expects " + std::to_string(p.total_photons) +
                      " photons but the state has no such sector");
  }
  std::vector<std::pair<std::string, LogicalFrame>> frames;
  for (const auto& req : p.required) {
    if (req.value) frames.emplace_back(req.port, req.basis);
  }
  const ModeUnitary align = frame_alignment(r, frames);
  const PhotonicState aligned = frames.empty() ? s : evolve(s, align);

  PhotonicState::Terms kept;
  for (const auto& [f, a] : aligned.terms()) {
    if (!meets_counts(f, r, p)) continue;
    bool ok = true;
    for (const auto& req : p.required) {
      if (!req.value) continue;
      const auto wrong = *req.value == 0 ? Polarization::kV : Polarization::kH;
      if (slot_count(f, r, r.port_index(req.port), wrong) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) kept.emplace_hint(kept.end(), f, a);
  }
  PhotonicState projected(r, std::move(kept), s.max_photons());
  if (frames.empty() || projected.empty()) return projected;
  return evolve(projected, ModeUnitary{r, align.matrix.adjoint()});
}

PostSelectOutcome post_select(const PhotonicState& s, const DetectionPattern& p) {
  const PhotonicState proj = project(s, p);
  double residual = 0.0;
  for (const auto& [f, a] : s.terms()) {
    if (!meets_counts(f, s.registry(), p)) residual += std::norm(a);
  }
  PostSelectOutcome out{PhotonicState(s.registry(), s.max_photons()), proj.norm_squared(),
                        residual, proj.empty()};
  if (!out.empty) {
    out.conditional_state = normalize(proj).state;
  } else {
    out.success_probability = 0.0;
  }
  return out;
}

std::map<FockState, Eigen::VectorXcd> logical_readout(const PhotonicState& s,
                                                      std::span<const QubitPort> qubits,
                                                      std::span<const QubitPort> spectators) {
  const auto& r = s.registry();
  std::vector<std::pair<std::string, LogicalFrame>> frames;
  for (const auto& q : qubits) frames.emplace_back(q.port, q.frame);
  for (const auto& q : spectators) frames.emplace_back(q.port, q.frame);
  const PhotonicState aligned = evolve(s, frame_alignment(r, frames));

  const std::size_t k = qubits.size();
  const auto dim = static_cast<Eigen::Index>(1) << k;
  std::vector<std::size_t> qports;
  for (const auto& q : qubits) qports.push_back(r.port_index(q.port));

  std::map<FockState, Eigen::VectorXcd> groups;
  for (const auto& [f, a] : aligned.terms()) {
    std::vector<std::uint8_t> env = f.occupations();
    Eigen::Index index = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t p = qports[i];
      const int h = slot_count(f, r, p, Polarization::kH);
      const int v = slot_count(f, r, p, Polarization::kV);
      if (h + v != 1) {
        throw Error("not a qubit state: port '" + r.ports()[p] + "' holds " +
                    std::to_string(h + v) + " photons");
      }
      index = (index << 1) | (v == 1 ? 1 : 0);
      for (int b = 0; b < r.internal_bins(); ++b) {
        const auto mh = r.mode(p, Polarization::kH, b);
        const auto mv = r.mode(p, Polarization::kV, b);
        env[mh] = static_cast<std::uint8_t>(env[mh] + env[mv]);
        env[mv] = 0;
      }
    }
    auto [it, inserted] = groups.try_emplace(FockState(std::move(env)), Eigen::VectorXcd::Zero(dim));
    it->second(index) += a;
  }
  return groups;
}

Eigen::MatrixXcd logical_density(const PhotonicState& s, std::span<const QubitPort> qubits) {
  const auto dim = static_cast<Eigen::Index>(1) << qubits.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [env, v] : logical_readout(s, qubits)) {
    rho += v * v.adjoint();
  }
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw ZeroNormError("logical density of an empty state");
  return rho / tr;
}

double reduced_purity(const Eigen::Matrix4cd& rho, int keep_qubit) {
  Eigen::Matrix2cd red = Eigen::Matrix2cd::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int t = 0; t < 2; ++t) {
        const int i = keep_qubit == 0 ? 2 * a + t : 2 * t + a;
        const int j = keep_qubit == 0 ? 2 * b + t : 2 * t + b;
        red(a, b) += rho(i, j);
      }
    }
  }
  return (red * red).trace().real();
}

}  // namespace pcnot
