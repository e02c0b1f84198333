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

// Independent reference implementations used only by the tests.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pcnot/fock.hpp"
#include "pcnot/optics.hpp"

namespace pcnot::oracle {

/// Sum over all permutations.
inline Complex naive_permanent(const Eigen::MatrixXcd& m) {
  const auto n = static_cast<int>(m.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Complex total = 0.0;
  do {
    Complex term = 1.0;
    for (int i = 0; i < n; ++i) term *= m(i, perm[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Eigen::MatrixXcd random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_complex(n, rng));
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

/// Evolution by expanding each creation operator a_j^dag into
/// sum_i U_ij a_i^dag and collecting monomials. Amplitude of an output
/// pattern T is coeff * sqrt(prod T_i!).
inline PhotonicState polynomial_evolve(const PhotonicState& s, const Eigen::MatrixXcd& u) {
  const auto& r = s.registry();
  const std::size_t modes = r.num_modes();
  std::map<std::vector<std::uint8_t>, Complex> out;
  for (const auto& [f, amp] : s.terms()) {
    // |S> = prod_j (a_j^dag)^{S_j} / sqrt(S_j!) |0>
    double norm = 1.0;
    std::vector<std::size_t> creators;
    for (std::size_t j = 0; j < modes; ++j) {
      for (int k = 0; k < f[j]; ++k) creators.push_back(j);
      norm *= std::tgamma(f[j] + 1.0);
    }
    std::map<std::vector<std::uint8_t>, Complex> poly{{std::vector<std::uint8_t>(modes, 0), amp / std::sqrt(norm)}};
    for (std::size_t j : creators) {
      std::map<std::vector<std::uint8_t>, Complex> next;
      for (const auto& [mono, c] : poly) {
        for (std::size_t i = 0; i < modes; ++i) {
          const Complex uij = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          if (uij == Complex(0.0)) continue;
          auto m2 = mono;
          ++m2[i];
          next[m2] += c * uij;
        }
      }
      poly = std::move(next);
    }
    for (const auto& [mono, c] : poly) {
      double fact = 1.0;
      for (auto n : mono) fact *= std::tgamma(n + 1.0);
      out[mono] += c * std::sqrt(fact);
    }
  }
  PhotonicState::Terms terms;
  for (const auto& [mono, c] : out) terms.emplace(FockState(mono), c);
  return PhotonicState(r, std::move(terms), s.max_photons());
}

/// Dense vector of `s` over the given key order.
inline Eigen::VectorXcd dense(const PhotonicState& s, const std::vector<FockState>& keys) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(keys.size()));
  for (std::size_t i = 0; i < keys.size(); ++i) v(static_cast<Eigen::Index>(i)) = s.amplitude(keys[i]);
  return v;
}

inline std::vector<FockState> union_keys(const std::vector<const PhotonicState*>& states) {
  std::vector<FockState> keys;
  for (const auto* s : states) {
    for (const auto& [f, a] : s->terms()) keys.push_back(f);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

inline double max_abs_diff(const PhotonicState& a, const PhotonicState& b) {
  const auto keys = union_keys({&a, &b});
  if (keys.empty()) return 0.0;
  return (dense(a, keys) - dense(b, keys)).cwiseAbs().maxCoeff();
}

/// Coincidence-basis output of the one-ancilla CNOT written out term by
/// term. Index 4a + 2c + t over (ancilla, control, target) logical values.
inline Eigen::VectorXcd one_ancilla_coincidence_amplitudes(const std::array<Complex, 4>& a) {
  const double k = 1.0 / (2.0 * std::sqrt(2.0));
  Eigen::VectorXcd v(8);
  v << a[0], a[1], a[3], a[2],  // ancilla 0: CNOT
      a[1], a[0], a[2], a[3];   // ancilla 1: target flipped
  return k * v;
}

inline std::array<Complex, 4> random_input(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::array<Complex, 4> a;
  double n = 0.0;
  for (auto& x : a) {
    x = Complex(g(rng), g(rng));
    n += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(n);
  return a;
}

}  // namespace pcnot::oracle
