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

#include "pcnot/sources.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "pcnot/errors.hpp"

namespace pcnot {
namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;
constexpr double kRankTolerance = 1e-10;

std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

Eigen::Vector2cd plate_output(double plate_deg) {
  return (wave_plate_jones(plate_deg) * Eigen::Vector2d(1.0, 0.0)).cast<Complex>();
}

struct InternalStates {
  ModeRegistry registry;
  std::map<std::string, std::vector<double>> by_label;
};

InternalStates assign_bins(const std::vector<std::string>& ports,
                           const std::vector<std::string>& labels,
                           const DistinguishabilityConfig& d) {
  const auto states = d.internal_states(labels);
  int bins = 1;
  for (const auto& v : states) bins = std::max(bins, static_cast<int>(v.size()));
  InternalStates out{ModeRegistry(ports, bins), {}};
  for (std::size_t i = 0; i < labels.size(); ++i) out.by_label[labels[i]] = states[i];
  return out;
}

PhotonicState add_photon(const PhotonicState& s, const InternalStates& bins, const std::string& port,
                         double plate_deg, const std::string& label) {
  return apply_creation(s, photon_modes(s.registry(), port, plate_output(plate_deg),
                                        bins.by_label.at(label)));
}

void append_unique(std::vector<std::string>& v, const std::string& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

void WeakCoherentConfig::validate() const {
  if (single_photon) return;
  if (!(mean_photon_number > 0.0)) throw ConfigError("mean photon number must be positive");
  if (max_photons < 1) throw ConfigError("weak coherent truncation must be at least 1");
  if (truncated_tail() > 1e-4) {
    throw ConfigError("weak coherent truncation drops more than 1e-4 of the pulse weight");
  }
}

double WeakCoherentConfig::poisson(int n) const {
  return std::exp(-mean_photon_number + n * std::log(mean_photon_number) - std::lgamma(n + 1.0));
}

std::vector<double> WeakCoherentConfig::sector_weights() const {
  const double non_empty = -std::expm1(-mean_photon_number);
  std::vector<double> w;
  for (int n = 1; n <= max_photons; ++n) w.push_back(poisson(n) / non_empty);
  return w;
}

double WeakCoherentConfig::truncated_tail() const {
  const double non_empty = -std::expm1(-mean_photon_number);
  double tail = 0.0;
  for (int n = max_photons + 1; n < max_photons + 200; ++n) {
    const double p = poisson(n);
    tail += p;
    if (p < 1e-300 || p < tail * 1e-17) break;
  }
  return tail / non_empty;
}

DistinguishabilityConfig::DistinguishabilityConfig(
    std::map<std::pair<std::string, std::string>, double> overlaps) {
  std::vector<std::string> labels;
  for (const auto& [pair, s] : overlaps) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ConfigError("overlap " + pair.first + "-" + pair.second + " must lie in [0, 1]");
    }
    if (pair.first == pair.second) {
      if (s != 1.0) throw ConfigError("self-overlap of " + pair.first + " must be 1");
      continue;
    }
    const auto k = key(pair.first, pair.second);
    auto [it, inserted] = overlaps_.emplace(k, s);
    if (!inserted && it->second != s) {
      throw ConfigError("conflicting overlaps for " + k.first + "-" + k.second);
    }
    append_unique(labels, pair.first);
    append_unique(labels, pair.second);
  }
  if (labels.empty()) return;
  const Eigen::MatrixXd g = gram(labels);
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff();
  if (min_eig < -kRankTolerance) {
    throw ConfigError("overlaps do not describe valid internal states (Gram matrix not PSD)");
  }
}

double DistinguishabilityConfig::overlap(const std::string& a, const std::string& b) const {
  if (a == b) return 1.0;
  const auto it = overlaps_.find(key(a, b));
  return it == overlaps_.end() ? 1.0 : it->second;
}

bool DistinguishabilityConfig::ideal() const {
  return std::all_of(overlaps_.begin(), overlaps_.end(), [](const auto& kv) { return kv.second == 1.0; });
}

Eigen::MatrixXd DistinguishabilityConfig::gram(const std::vector<std::string>& labels) const {
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = std::sqrt(overlap(labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(j)]));
    }
  }
  return g;
}

std::vector<std::vector<double>> DistinguishabilityConfig::internal_states(
    const std::vector<std::string>& labels) const {
  const Eigen::MatrixXd g = gram(labels);
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> pivots;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::vector<double> row;
    double residual = 1.0;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      const auto& prow = rows[pivots[k]];
      double v = g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(pivots[k]));
      for (std::size_t m = 0; m < k; ++m) v -= row[m] * prow[m];
      v /= prow[k];
      row.push_back(v);
      residual -= v * v;
    }
    if (residual > kRankTolerance) {
      row.push_back(std::sqrt(residual));
      pivots.push_back(i);
    } else if (residual < -1e-8) {
      throw ConfigError("overlaps do not describe valid internal states (Gram matrix not PSD)");
    }
    rows.push_back(std::move(row));
  }
  for (auto& r : rows) r.resize(std::max<std::size_t>(pivots.size(), 1), 0.0);
  return rows;
}

double max_equal_overlap(double overlap_first_pair) {
  return 0.5 * (1.0 + std::sqrt(overlap_first_pair));
}

Eigen::Vector2d AnalyzerSettings::pass_direction(const std::string& port) const {
  const auto it = angles_deg.find(port);
  if (it == angles_deg.end()) throw ConfigError("no analyzer angle for port '" + port + "'");
  if (logical) {
    const auto f = frames.find(port);
    if (f == frames.end()) throw ConfigError("no logical frame for port '" + port + "'");
    return f->second.analyzer(it->second);
  }
  return Eigen::Vector2d(std::cos(it->second * kDeg), std::sin(it->second * kDeg));
}

void CountingConfig::validate() const {
  if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0)) {
    throw ConfigError("detector efficiency must lie in (0, 1]");
  }
}

PhotonicState build_photons(const std::vector<PhotonSpec>& photons, const DistinguishabilityConfig& d,
                            std::vector<std::string> ports) {
  std::vector<std::string> labels;
  for (const auto& p : photons) {
    append_unique(labels, p.label);
    if (std::find(ports.begin(), ports.end(), p.port) == ports.end()) ports.push_back(p.port);
  }
  const InternalStates bins = assign_bins(ports, labels, d);
  PhotonicState s = PhotonicState::vacuum(bins.registry);
  for (const auto& p : photons) s = add_photon(s, bins, p.port, p.plate_deg, p.label);
  return s;
}

PhotonicState build_input_state(const SpdcPairConfig& spdc, const WeakCoherentConfig& wcs,
                                const DistinguishabilityConfig& d, std::vector<std::string> ports) {
  wcs.validate();
  if (ports.empty()) ports = {spdc.ancilla_port, spdc.control_port, wcs.port};
  if (wcs.single_photon) {
    return build_photons({{spdc.ancilla_port, spdc.ancilla_plate_deg, spdc.ancilla_port},
                          {spdc.control_port, spdc.control_plate_deg, spdc.control_port},
                          {wcs.port, wcs.plate_deg, wcs.port}},
                         d, ports);
  }
  if (2 + wcs.max_photons > kDefaultMaxPhotons) {
    throw ConfigError("weak coherent truncation exceeds the photon cap");
  }
  const InternalStates bins = assign_bins(ports, {spdc.ancilla_port, spdc.control_port, wcs.port}, d);
  PhotonicState pair = PhotonicState::vacuum(bins.registry);
  pair = add_photon(pair, bins, spdc.ancilla_port, spdc.ancilla_plate_deg, spdc.ancilla_port);
  pair = add_photon(pair, bins, spdc.control_port, spdc.control_plate_deg, spdc.control_port);

  // Sectors never interfere under photon-counting detection, so a coherent
  // sum reproduces the phase-averaged pulse.
  PhotonicState out(bins.registry);
  const auto weights = wcs.sector_weights();
  PhotonicState sector_state = pair;
  double factorial = 1.0;
  for (int n = 1; n <= wcs.max_photons; ++n) {
    sector_state = add_photon(sector_state, bins, wcs.port, wcs.plate_deg, wcs.port);
    factorial *= n;
    out = superpose(out, scaled(sector_state, std::sqrt(weights[static_cast<std::size_t>(n - 1)] / factorial)));
  }
  return out;
}

double detection_probability(const PhotonicState& evolved, const AnalyzerSettings& analyzers,
                             const DetectionPattern& pattern, double efficiency) {
  const auto& r = evolved.registry();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(r.num_modes()),
                                                  static_cast<Eigen::Index>(r.num_modes()));
  std::vector<bool> polarized(r.num_ports(), false);
  for (const auto& [port, angle] : analyzers.angles_deg) {
    if (!r.has_port(port)) continue;
    const Eigen::Vector2d p = analyzers.pass_direction(port);
    Eigen::Matrix2cd jones;
    jones << p(0), p(1), -p(1), p(0);
    u = port_polarization_unitary(r, port, jones).matrix * u;
    polarized[r.port_index(port)] = true;
  }
  const PhotonicState rotated = evolve(evolved, ModeUnitary{r, u});

  std::vector<std::size_t> required;
  for (const auto& req : pattern.required) required.push_back(r.port_index(req.port));

  double total = 0.0;
  for (const auto& [f, a] : rotated.terms()) {
    double w = std::norm(a);
    for (std::size_t p : required) {
      int k = 0;
      for (int b = 0; b < r.internal_bins(); ++b) {
        k += f[r.mode(p, Polarization::kH, b)];
        if (!polarized[p]) k += f[r.mode(p, Polarization::kV, b)];
      }
      w *= k == 0 ? 0.0 : 1.0 - std::pow(1.0 - efficiency, k);
      if (w == 0.0) break;
    }
    total += w;
  }
  return total;
}

double coincidence_probability(const PhotonicState& state, const OpticalCircuit& circuit,
                               const AnalyzerSettings& analyzers, const DetectionPattern& pattern,
                               double efficiency) {
  const PhotonicState out = evolve(state, compile(circuit, state.registry()));
  return detection_probability(out, analyzers, pattern, efficiency);
}

std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities,
                                         const CountingConfig& counting) {
  counting.validate();
  std::mt19937_64 rng(counting.seed);
  const double eff3 = std::pow(counting.detector_efficiency, 3);
  std::vector<std::uint64_t> out;
  out.reserve(probabilities.size());
  for (double p : probabilities) {
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) throw ConfigError("probability outside [0, 1]");
    const double q = std::clamp(p * eff3, 0.0, 1.0);
    if (q == 0.0) {
      out.push_back(0);
    } else if (q == 1.0) {
      out.push_back(counting.trials_per_setting);
    } else {
      std::binomial_distribution<std::uint64_t> dist(counting.trials_per_setting, q);
      out.push_back(dist(rng));
    }
  }
  return out;
}

}  // namespace pcnot
