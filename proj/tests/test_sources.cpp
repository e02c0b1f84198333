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

#include "oracles.hpp"
#include "pcnot/errors.hpp"
#include "pcnot/gates.hpp"
#include "pcnot/runner.hpp"
#include "pcnot/sources.hpp"

using namespace pcnot;

namespace {

AnalyzerSettings cnot_analyzers(double a, double c, double t) {
  AnalyzerSettings an;
  an.frames = {{"A", frames::kPbs2Side}, {"C", frames::kLab}, {"T", frames::kPbs2Side}};
  an.angles_deg = {{"A", a}, {"C", c}, {"T", t}};
  return an;
}

DistinguishabilityConfig overlaps(double ac, double at, double ct) {
  return DistinguishabilityConfig({{{"A", "C"}, ac}, {{"A", "T"}, at}, {{"C", "T"}, ct}});
}

// Coincidence at a 50/50 splitter from the polynomial-expansion oracle.
double hom_oracle(double s) {
  const PhotonicState in = build_photons({{"A", 0.0, "A"}, {"C", 0.0, "C"}},
                                         DistinguishabilityConfig({{{"A", "C"}, s}}), {"A", "C"});
  OpticalCircuit bs(ModeRegistry({"A", "C"}));
  bs.add(BeamSplitter{0.5}, {"A", "C"});
  const PhotonicState out = oracle::polynomial_evolve(in, compile(bs, in.registry()).matrix);
  const auto& r = out.registry();
  double p = 0.0;
  for (const auto& [f, a] : out.terms()) {
    int na = 0, nc = 0;
    for (std::size_t m = 0; m < r.num_modes(); ++m) (r.describe(m).port == 0 ? na : nc) += f[m];
    if (na == 1 && nc == 1) p += std::norm(a);
  }
  return p;
}

}  // namespace

TEST(WeakCoherent, PoissonSectors) {
  WeakCoherentConfig w;
  w.single_photon = false;
  const auto weights = w.sector_weights();
  ASSERT_EQ(weights.size(), 2u);
  EXPECT_NEAR(weights[1] / weights[0], w.mean_photon_number / 2.0, 1e-12);
  EXPECT_NEAR(w.poisson(1), std::exp(-1e-3) * 1e-3, 1e-18);
  EXPECT_LT(w.truncated_tail(), 1e-6);
  EXPECT_NEAR(weights[0] + weights[1] + w.truncated_tail(), 1.0, 1e-14);
  w.mean_photon_number = 0.5;
  w.max_photons = 1;
  EXPECT_THROW(w.validate(), ConfigError);
}

TEST(WeakCoherent, InputStateSectors) {
  WeakCoherentConfig w;
  w.single_photon = false;
  const PhotonicState s = build_input_state(SpdcPairConfig{}, w, {});
  const auto sectors = s.sector_weights();
  ASSERT_EQ(sectors.size(), 2u);
  EXPECT_NEAR(sectors.at(4) / sectors.at(3), 5e-4, 1e-9);
  // Only the dropped n > 2 tail is missing.
  EXPECT_NEAR(s.norm_squared(), 1.0 - w.truncated_tail(), 1e-12);
}

TEST(Distinguishability, RejectsInvalidOverlaps) {
  EXPECT_THROW(overlaps(1.0, 1.0, 0.0), ConfigError);
  EXPECT_THROW(DistinguishabilityConfig({{{"A", "C"}, 1.2}}), ConfigError);
  EXPECT_THROW(DistinguishabilityConfig({{{"A", "A"}, 0.5}}), ConfigError);
  EXPECT_NO_THROW(overlaps(0.9, 0.6, 0.6));
}

TEST(Distinguishability, InternalStatesReproduceOverlaps) {
  const DistinguishabilityConfig d = overlaps(0.9, 0.4, 0.7);
  const std::vector<std::string> labels{"A", "C", "T"};
  const auto v = d.internal_states(labels);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < v[i].size(); ++k) dot += v[i][k] * v[j][k];
      EXPECT_NEAR(dot * dot, d.overlap(labels[i], labels[j]), 1e-12);
    }
  }
  EXPECT_EQ(DistinguishabilityConfig{}.internal_states(labels)[2].size(), 1u);
  EXPECT_EQ(overlaps(0.9, 0.0, 0.0).internal_states(labels)[0].size(), 3u);
}

TEST(Hom, VisibilityEqualsOverlap) {
  OpticalCircuit bs(ModeRegistry({"A", "C"}));
  bs.add(BeamSplitter{0.5}, {"A", "C"});
  for (double s : {0.0, 0.25, 0.5, 0.85, 0.95, 1.0}) {
    const PhotonicState in = build_photons({{"A", 0.0, "A"}, {"C", 0.0, "C"}},
                                           DistinguishabilityConfig({{{"A", "C"}, s}}), {"A", "C"});
    const double p = coincidence_probability(in, bs, AnalyzerSettings{}, DetectionPattern::coincidence({"A", "C"}));
    EXPECT_NEAR(p, hom_oracle(s), 1e-12);
    EXPECT_NEAR(1.0 - 2.0 * p, s, 1e-10);
  }
}

TEST(Coincidence, IdealBasisPeak) {
  SpdcPairConfig spdc;
  spdc.control_plate_deg = frames::kLab.preparation_plate_deg(1);
  WeakCoherentConfig t;
  t.single_photon = true;
  t.plate_deg = frames::kPbs2Side.preparation_plate_deg(0);
  const PhotonicState in = build_input_state(spdc, t, {});
  const LinearOpticalGate g = cnot_one_ancilla_gate();
  const DetectionPattern all = DetectionPattern::coincidence({"A", "C", "T"});
  for (int c = 0; c < 2; ++c) {
    for (int tt = 0; tt < 2; ++tt) {
      const double p = coincidence_probability(in, g.circuit, cnot_analyzers(0.0, 90.0 * c, 90.0 * tt), all);
      EXPECT_NEAR(p, (c == 1 && tt == 1) ? 0.125 : 0.0, 1e-12);
    }
  }
  EXPECT_NEAR(coincidence_probability(in, g.circuit, cnot_analyzers(0.0, 90.0, 90.0), all, 0.5), 0.125 / 8.0,
              1e-12);
}

TEST(Coincidence, PartialOverlapPopulatesWrongCells) {
  SpdcPairConfig spdc;
  WeakCoherentConfig t;
  t.single_photon = true;
  const LinearOpticalGate g = cnot_one_ancilla_gate();
  const PhotonicState in = build_input_state(spdc, t, overlaps(0.65, 0.65, 0.65));
  const double wrong = coincidence_probability(in, g.circuit, cnot_analyzers(0.0, 0.0, 90.0),
                                               DetectionPattern::coincidence({"A", "C", "T"}));
  EXPECT_GT(wrong, 1e-3);
}

TEST(Coincidence, GatedVisibilityIsMonotoneInEachOverlap) {
  Scenario sc;
  const std::vector<double> grid{0.0, 0.2, 0.4, 0.6, 0.8};
  for (double fixed : {0.5, 0.8}) {
    double prev = -1.0;
    for (double s : grid) {
      const double v = fringe_visibility(sc, overlaps(fixed, s, s));
      EXPECT_GE(v, prev - 1e-12);
      prev = v;
    }
  }
  // Pairs with the target held below 1 in sum, so every grid point is valid.
  for (const auto& [at, ct] : {std::pair{0.45, 0.4}, std::pair{0.3, 0.6}}) {
    double prev = -1.0;
    for (double s : grid) {
      const double v = fringe_visibility(sc, overlaps(s, at, ct));
      EXPECT_GE(v, prev - 1e-12);
      prev = v;
    }
  }
}

TEST(Sampling, EdgeCasesAndDeterminism) {
  CountingConfig c;
  c.trials_per_setting = 100;
  const std::vector<double> edge{0.0, 1.0};
  EXPECT_EQ(sample_counts(edge, c), (std::vector<std::uint64_t>{0, 100}));

  c.trials_per_setting = 10000;
  c.seed = 42;
  const std::vector<double> p{0.125, 0.125, 0.5};
  const auto a = sample_counts(p, c);
  EXPECT_EQ(a, sample_counts(p, c));
  const double sigma = std::sqrt(10000 * 0.125 * 0.875);
  EXPECT_LT(std::abs(static_cast<double>(a[0]) - 1250.0), 5.0 * sigma);

  const std::vector<double> bad{1.5};
  EXPECT_THROW(sample_counts(bad, c), ConfigError);
}
