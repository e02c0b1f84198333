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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pcnot/errors.hpp"
#include "pcnot/gates.hpp"
#include "pcnot/optics.hpp"

using namespace pcnot;

namespace {

PhotonicState photons(const ModeRegistry& r,
                      const std::vector<std::tuple<std::string, Eigen::Vector2cd, int>>& spec) {
  PhotonicState s = PhotonicState::vacuum(r);
  for (const auto& [port, pol, bin] : spec) {
    std::vector<double> internal(static_cast<std::size_t>(bin + 1), 0.0);
    internal[static_cast<std::size_t>(bin)] = 1.0;
    s = apply_creation(s, photon_modes(r, port, pol, internal));
  }
  return s;
}

const Eigen::Vector2cd kH(1.0, 0.0);
const Eigen::Vector2cd kV(0.0, 1.0);

Complex amp(const PhotonicState& s, const std::vector<std::pair<std::size_t, int>>& occ) {
  FockState f(s.registry().num_modes());
  for (const auto& [m, n] : occ) {
    for (int k = 0; k < n; ++k) f = f.raised(m);
  }
  return s.amplitude(f);
}

}  // namespace

TEST(Elements, AllUnitaryKindsAreUnitary) {
  ModeRegistry r({"P", "Q"}, 2);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(-180.0, 180.0), refl(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    for (const ElementKind& e : std::vector<ElementKind>{BeamSplitter{refl(rng)}, PolarizingBS{ang(rng)},
                                                         WavePlate{ang(rng)}, BasisRotator{ang(rng)},
                                                         PhaseShifter{ang(rng)}}) {
      const bool two = std::holds_alternative<BeamSplitter>(e) || std::holds_alternative<PolarizingBS>(e);
      const auto u = element_unitary(OpticalElement{e, two ? std::vector<std::string>{"P", "Q"}
                                                           : std::vector<std::string>{"Q"}},
                                     r);
      EXPECT_LT(u.unitarity_deviation(), 1e-12) << element_name(e);
    }
  }
}

TEST(Elements, RejectsInvalidUse) {
  ModeRegistry r({"P", "Q"});
  EXPECT_THROW(element_unitary(OpticalElement{Polarizer{0.0}, {"P"}}, r), NonUnitaryElementError);
  EXPECT_THROW(element_unitary(OpticalElement{BeamSplitter{}, {"P"}}, r), RegistryError);
  EXPECT_THROW(element_unitary(OpticalElement{BeamSplitter{}, {"P", "P"}}, r), RegistryError);
  OpticalCircuit c(r);
  EXPECT_THROW(c.add(WavePlate{0.0}, {"Z"}), RegistryError);
}

TEST(Elements, PolarizingSplitterSigns) {
  ModeRegistry r({"P", "Q"});
  const auto u = element_unitary(OpticalElement{PolarizingBS{0.0}, {"P", "Q"}}, r).matrix;
  const auto ph = r.mode("P", Polarization::kH), pv = r.mode("P", Polarization::kV);
  const auto qh = r.mode("Q", Polarization::kH), qv = r.mode("Q", Polarization::kV);
  EXPECT_NEAR(std::abs(u(ph, ph) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(qh, qh) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(qv, pv) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(pv, qv) + 1.0), 0.0, 1e-15);

  // The 45 deg splitter transmits diagonal light unchanged.
  const auto u45 = element_unitary(OpticalElement{PolarizingBS{45.0}, {"P", "Q"}}, r).matrix;
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(4);
  d(ph) = d(pv) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR((u45 * d - d).norm(), 0.0, 1e-15);
}

TEST(Elements, WavePlateRotatesLinearPolarization) {
  for (double a : {0.0, 11.0, 22.5, 45.0, -30.0}) {
    const Eigen::Vector2d out = wave_plate_jones(a) * Eigen::Vector2d(1.0, 0.0);
    EXPECT_NEAR(out(0), std::cos(2 * a * M_PI / 180), 1e-15);
    EXPECT_NEAR(out(1), std::sin(2 * a * M_PI / 180), 1e-15);
  }
}

TEST(Evolve, MatchesPolynomialExpansionOracle) {
  std::mt19937_64 rng(17);
  ModeRegistry r({"P", "Q", "R"});
  for (int k = 0; k < 10; ++k) {
    const ModeUnitary u{r, oracle::random_unitary(static_cast<int>(r.num_modes()), rng)};
    PhotonicState s = photons(r, {{"P", kH, 0}, {"Q", kV, 0}, {"R", kH, 0}});
    s = superpose(scaled(s, 0.6), scaled(photons(r, {{"P", kH, 0}, {"P", kH, 0}, {"Q", kV, 0}}), 0.8));
    const PhotonicState got = evolve(s, u);
    const PhotonicState want = oracle::polynomial_evolve(s, u.matrix);
    EXPECT_LT(oracle::max_abs_diff(got, want), 1e-12);
    EXPECT_NEAR(got.norm_squared(), s.norm_squared(), 1e-12);
  }
}

TEST(Evolve, CircuitMatchesOracleWithBins) {
  ModeRegistry r({"A", "C", "T"}, 2);
  const LinearOpticalGate g = cnot_one_ancilla_gate(false, 7.0);
  const ModeUnitary u = compile(g.circuit, r);
  EXPECT_LT(u.unitarity_deviation(), 1e-12);
  const Eigen::Vector2cd d(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  const PhotonicState s = photons(r, {{"A", d, 0}, {"C", kV, 1}, {"T", kH, 0}});
  EXPECT_LT(oracle::max_abs_diff(evolve(s, u), oracle::polynomial_evolve(s, u.matrix)), 1e-12);
}

TEST(Evolve, InternalBinsAreUntouched) {
  const LinearOpticalGate g = cnot_one_ancilla_gate();
  const ModeRegistry r1 = g.circuit.registry();
  const ModeRegistry r3 = r1.with_bins(3);
  const auto u1 = compile(g.circuit).matrix;
  const auto u3 = compile(g.circuit, r3).matrix;
  for (std::size_t i = 0; i < r3.num_modes(); ++i) {
    for (std::size_t j = 0; j < r3.num_modes(); ++j) {
      const auto a = r3.describe(i), b = r3.describe(j);
      const Complex got = u3(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (a.bin != b.bin) {
        EXPECT_EQ(got, Complex(0.0));
      } else {
        const Complex want = u1(static_cast<Eigen::Index>(r1.mode(a.port, a.polarization)),
                                static_cast<Eigen::Index>(r1.mode(b.port, b.polarization)));
        EXPECT_EQ(got, want);
      }
    }
  }
}

TEST(Evolve, HongOuMandelBunching) {
  ModeRegistry r({"P", "Q"});
  OpticalCircuit c(r);
  c.add(BeamSplitter{0.5}, {"P", "Q"});
  const PhotonicState out = evolve(photons(r, {{"P", kH, 0}, {"Q", kH, 0}}), compile(c));
  const auto ph = r.mode("P", Polarization::kH), qh = r.mode("Q", Polarization::kH);
  EXPECT_NEAR(std::abs(amp(out, {{ph, 1}, {qh, 1}})), 0.0, 1e-15);
  EXPECT_NEAR(std::norm(amp(out, {{ph, 2}})), 0.5, 1e-15);
  EXPECT_NEAR(std::norm(amp(out, {{qh, 2}})), 0.5, 1e-15);
}

TEST(LogicalFrame, PlatesActAsPaulis) {
  for (const LogicalFrame f : {frames::kLab, frames::kPbs2Side, frames::kCopy, frames::kDiagonal}) {
    const Eigen::Matrix2d x = wave_plate_jones(f.bit_flip_plate_deg());
    const Eigen::Matrix2d z = wave_plate_jones(f.phase_flip_plate_deg());
    for (int b = 0; b < 2; ++b) {
      EXPECT_NEAR((x * f.polarization(b) - f.polarization(1 - b)).norm(), 0.0, 1e-12);
      EXPECT_NEAR((z * f.polarization(b) - (b ? -1.0 : 1.0) * f.polarization(b)).norm(), 0.0, 1e-12);
      const Eigen::Vector2d prepared = wave_plate_jones(f.preparation_plate_deg(b)) * Eigen::Vector2d(1.0, 0.0);
      EXPECT_NEAR((prepared - f.polarization(b)).norm(), 0.0, 1e-12);
    }
  }
  EXPECT_THROW((LogicalFrame{0.0, 45.0}.validate()), ConfigError);
}
