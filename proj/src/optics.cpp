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

#include "pcnot/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "pcnot/errors.hpp"
#include "pcnot/permanent.hpp"

namespace pcnot {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kSupportEps = 1e-15;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_ports(const OpticalElement& e, std::size_t lo, std::size_t hi) {
  if (e.ports.size() < lo || e.ports.size() > hi) {
    throw RegistryError(element_name(e.kind) + " expects " + std::to_string(lo) +
                        (lo == hi ? "" : "-" + std::to_string(hi)) + " port(s), got " +
                        std::to_string(e.ports.size()));
  }
  if (e.ports.size() == 2 && e.ports[0] == e.ports[1]) {
    throw RegistryError(element_name(e.kind) + " needs two distinct ports");
  }
}

// Write a 2x2 polarization block for `port` into every bin.
void set_polarization_block(Eigen::MatrixXcd& u, const ModeRegistry& r, std::size_t port,
                            const Eigen::Matrix2cd& j) {
  for (int b = 0; b < r.internal_bins(); ++b) {
    const std::size_t idx[2] = {r.mode(port, Polarization::kH, b), r.mode(port, Polarization::kV, b)};
    for (int o = 0; o < 2; ++o) {
      for (int i = 0; i < 2; ++i) {
        u(static_cast<Eigen::Index>(idx[o]), static_cast<Eigen::Index>(idx[i])) = j(o, i);
      }
    }
  }
}

// Write a 4x4 block on (p_H, p_V, q_H, q_V) into every bin.
void set_two_port_block(Eigen::MatrixXcd& u, const ModeRegistry& r, std::size_t p, std::size_t q,
                        const Eigen::Matrix4cd& blk) {
  for (int b = 0; b < r.internal_bins(); ++b) {
    const std::size_t idx[4] = {r.mode(p, Polarization::kH, b), r.mode(p, Polarization::kV, b),
                                r.mode(q, Polarization::kH, b), r.mode(q, Polarization::kV, b)};
    for (int o = 0; o < 4; ++o) {
      for (int i = 0; i < 4; ++i) {
        u(static_cast<Eigen::Index>(idx[o]), static_cast<Eigen::Index>(idx[i])) = blk(o, i);
      }
    }
  }
}

Eigen::Matrix4cd pbs_block(double angle_deg) {
  Eigen::Matrix4cd pbs = Eigen::Matrix4cd::Zero();
  pbs(0, 0) = 1.0;   // p_H -> p_H
  pbs(2, 2) = 1.0;   // q_H -> q_H
  pbs(3, 1) = 1.0;   // p_V -> q_V
  pbs(1, 3) = -1.0;  // q_V -> p_V
  if (angle_deg == 0.0) return pbs;
  Eigen::Matrix4cd in_rot = Eigen::Matrix4cd::Zero();
  Eigen::Matrix4cd out_rot = Eigen::Matrix4cd::Zero();
  const Eigen::Matrix2cd fwd = basis_rotator_jones(angle_deg).cast<Complex>();
  const Eigen::Matrix2cd back = basis_rotator_jones(-angle_deg).cast<Complex>();
  in_rot.block<2, 2>(0, 0) = fwd;
  in_rot.block<2, 2>(2, 2) = fwd;
  out_rot.block<2, 2>(0, 0) = back;
  out_rot.block<2, 2>(2, 2) = back;
  return out_rot * pbs * in_rot;
}

Eigen::Matrix4cd beam_splitter_block(double reflectivity) {
  if (reflectivity < 0.0 || reflectivity > 1.0) {
    throw ConfigError("beam splitter reflectivity must lie in [0, 1]");
  }
  const double t = std::sqrt(1.0 - reflectivity);
  const Complex r(0.0, std::sqrt(reflectivity));
  Eigen::Matrix4cd blk = Eigen::Matrix4cd::Zero();
  for (int pol = 0; pol < 2; ++pol) {
    blk(pol, pol) = t;
    blk(2 + pol, 2 + pol) = t;
    blk(pol, 2 + pol) = r;
    blk(2 + pol, pol) = r;
  }
  return blk;
}

void enumerate_outputs(const std::vector<std::vector<std::size_t>>& supports, std::size_t k,
                       std::vector<std::size_t>& current,
                       std::set<std::vector<std::size_t>>& out) {
  if (k == supports.size()) {
    std::vector<std::size_t> sorted = current;
    std::sort(sorted.begin(), sorted.end());
    out.insert(std::move(sorted));
    return;
  }
  for (std::size_t m : supports[k]) {
    current.push_back(m);
    enumerate_outputs(supports, k + 1, current, out);
    current.pop_back();
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::string element_name(const ElementKind& kind) {
  return std::visit(Overloaded{
                        [](const BeamSplitter&) { return std::string("BeamSplitter"); },
                        [](const PolarizingBS&) { return std::string("PolarizingBS"); },
                        [](const WavePlate&) { return std::string("WavePlate"); },
                        [](const BasisRotator&) { return std::string("BasisRotator"); },
                        [](const PhaseShifter&) { return std::string("PhaseShifter"); },
                        [](const Polarizer&) { return std::string("Polarizer"); },
                    },
                    kind);
}

Eigen::Matrix2d wave_plate_jones(double angle_deg) {
  const double c = std::cos(2.0 * angle_deg * kDeg);
  const double s = std::sin(2.0 * angle_deg * kDeg);
  Eigen::Matrix2d j;
  j << c, s, s, -c;
  return j;
}

Eigen::Matrix2d basis_rotator_jones(double angle_deg) {
  const double c = std::cos(angle_deg * kDeg);
  const double s = std::sin(angle_deg * kDeg);
  Eigen::Matrix2d j;
  j << c, s, -s, c;
  return j;
}

ModeUnitary ModeUnitary::identity(const ModeRegistry& registry) {
  const auto n = static_cast<Eigen::Index>(registry.num_modes());
  return ModeUnitary{registry, Eigen::MatrixXcd::Identity(n, n)};
}

double ModeUnitary::unitarity_deviation() const {
  const Eigen::MatrixXcd d =
      matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
  return d.cwiseAbs().maxCoeff();
}

OpticalCircuit& OpticalCircuit::add(ElementKind kind, std::vector<std::string> ports) {
  return add(OpticalElement{std::move(kind), std::move(ports)});
}

OpticalCircuit& OpticalCircuit::add(OpticalElement e) {
  for (const auto& p : e.ports) {
    registry_.port_index(p);
  }
  elements_.push_back(std::move(e));
  return *this;
}

ModeUnitary element_unitary(const OpticalElement& e, const ModeRegistry& r) {
  ModeUnitary u = ModeUnitary::identity(r);
  std::visit(
      Overloaded{
          [&](const BeamSplitter& bs) {
            require_ports(e, 2, 2);
            set_two_port_block(u.matrix, r, r.port_index(e.ports[0]), r.port_index(e.ports[1]),
                               beam_splitter_block(bs.reflectivity));
          },
          [&](const PolarizingBS& pbs) {
            require_ports(e, 2, 2);
            set_two_port_block(u.matrix, r, r.port_index(e.ports[0]), r.port_index(e.ports[1]),
                               pbs_block(pbs.basis_angle_deg));
          },
          [&](const WavePlate& wp) {
            require_ports(e, 1, 2);
            for (const auto& p : e.ports) {
              set_polarization_block(u.matrix, r, r.port_index(p),
                                     wave_plate_jones(wp.angle_deg).cast<Complex>());
            }
          },
          [&](const BasisRotator& br) {
            require_ports(e, 1, 2);
            for (const auto& p : e.ports) {
              set_polarization_block(u.matrix, r, r.port_index(p),
                                     basis_rotator_jones(br.angle_deg).cast<Complex>());
            }
          },
          [&](const PhaseShifter& ps) {
            require_ports(e, 1, 2);
            const Complex ph = std::polar(1.0, ps.phase_deg * kDeg);
            for (const auto& p : e.ports) {
              set_polarization_block(u.matrix, r, r.port_index(p),
                                     Eigen::Matrix2cd::Identity() * ph);
            }
          },
          [&](const Polarizer&) {
            throw NonUnitaryElementError(
                "Polarizer is a projector; use it as a detection-stage analyzer");
          },
      },
      e.kind);
  return u;
}

ModeUnitary compile(const OpticalCircuit& c) { return compile(c, c.registry()); }

ModeUnitary compile(const OpticalCircuit& c, const ModeRegistry& r) {
  if (r.ports() != c.registry().ports()) {
    throw RegistryError("compile: registry ports differ from the circuit's");
  }
  ModeUnitary total = ModeUnitary::identity(r);
  for (const auto& e : c.elements()) {
    total.matrix = element_unitary(e, r).matrix * total.matrix;
  }
  return total;
}

PhotonicState evolve(const PhotonicState& s, const ModeUnitary& u) {
  if (!(s.registry() == u.registry)) {
    throw RegistryError("evolve: state and unitary registries differ");
  }
  const auto m = static_cast<std::size_t>(u.matrix.rows());
  std::vector<std::vector<std::size_t>> column_support(m);
  for (std::size_t col = 0; col < m; ++col) {
    for (std::size_t row = 0; row < m; ++row) {
      if (std::abs(u.matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col))) >
          kSupportEps) {
        column_support[col].push_back(row);
      }
    }
  }

  PhotonicState::Terms out;
  for (const auto& [in, amp] : s.terms()) {
    const int n = in.photon_number();
    if (n > s.max_photons()) {
      throw PhotonCapError("evolve: photon number exceeds cap");
    }
    std::vector<std::size_t> in_modes;
    double in_fact = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      for (int c = 0; c < in[k]; ++c) in_modes.push_back(k);
      in_fact *= factorial(in[k]);
    }
    std::vector<std::vector<std::size_t>> supports;
    supports.reserve(in_modes.size());
    for (std::size_t k : in_modes) supports.push_back(column_support[k]);

    std::set<std::vector<std::size_t>> outputs;
    std::vector<std::size_t> scratch;
    enumerate_outputs(supports, 0, scratch, outputs);

    Eigen::MatrixXcd sub(n, n);
    for (const auto& out_modes : outputs) {
      std::vector<std::uint8_t> occ(m, 0);
      for (std::size_t k : out_modes) occ[k] += 1;
      double out_fact = 1.0;
      for (std::size_t k = 0; k < m; ++k) out_fact *= factorial(occ[k]);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          sub(i, j) = u.matrix(static_cast<Eigen::Index>(out_modes[static_cast<std::size_t>(i)]),
                               static_cast<Eigen::Index>(in_modes[static_cast<std::size_t>(j)]));
        }
      }
      const Complex a = permanent(sub) / std::sqrt(in_fact * out_fact);
      out[FockState(std::move(occ))] += amp * a;
    }
  }
  return PhotonicState(s.registry(), std::move(out), s.max_photons());
}

ModeUnitary port_polarization_unitary(const ModeRegistry& r, std::string_view port,
                                      const Eigen::Matrix2cd& jones) {
  ModeUnitary u = ModeUnitary::identity(r);
  set_polarization_block(u.matrix, r, r.port_index(port), jones);
  return u;
}

Eigen::Vector2d LogicalFrame::polarization(int bit) const {
  const double a = (bit == 0 ? zero_deg : one_deg) * kDeg;
  return Eigen::Vector2d(std::cos(a), std::sin(a));
}

Eigen::Vector2d LogicalFrame::analyzer(double theta_deg) const {
  const double t = theta_deg * kDeg;
  return std::cos(t) * polarization(0) + std::sin(t) * polarization(1);
}

Eigen::Matrix2d LogicalFrame::to_logical() const {
  Eigen::Matrix2d m;
  m.row(0) = polarization(0).transpose();
  m.row(1) = polarization(1).transpose();
  return m;
}

double LogicalFrame::preparation_plate_deg(int bit) const {
  return 0.5 * (bit == 0 ? zero_deg : one_deg);
}

void LogicalFrame::validate() const {
  const double d = std::fmod(std::abs(one_deg - zero_deg), 180.0);
  if (std::abs(d - 90.0) > 1e-9) {
    throw ConfigError("logical frame angles must differ by 90 degrees");
  }
}

ModeUnitary frame_alignment(const ModeRegistry& r,
                            const std::vector<std::pair<std::string, LogicalFrame>>& frames) {
  ModeUnitary u = ModeUnitary::identity(r);
  for (const auto& [port, frame] : frames) {
    frame.validate();
    set_polarization_block(u.matrix, r, r.port_index(port), frame.to_logical().cast<Complex>());
  }
  return u;
}

std::vector<std::pair<std::size_t, Complex>> photon_modes(const ModeRegistry& r,
                                                          std::string_view port,
                                                          const Eigen::Vector2cd& pol,
                                                          std::span<const double> internal) {
  static constexpr double kUnit[1] = {1.0};
  if (internal.empty()) internal = kUnit;
  if (internal.size() > static_cast<std::size_t>(r.internal_bins())) {
    throw RegistryError("internal state has more bins than the registry");
  }
  const std::size_t p = r.port_index(port);
  std::vector<std::pair<std::size_t, Complex>> out;
  for (std::size_t b = 0; b < internal.size(); ++b) {
    if (internal[b] == 0.0) continue;
    const int bin = static_cast<int>(b);
    out.emplace_back(r.mode(p, Polarization::kH, bin), pol(0) * internal[b]);
    out.emplace_back(r.mode(p, Polarization::kV, bin), pol(1) * internal[b]);
  }
  return out;
}

}  // namespace pcnot
