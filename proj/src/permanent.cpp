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

#include "pcnot/permanent.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pcnot {

Complex permanent(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("permanent of a non-square matrix");
  }
  const int n = static_cast<int>(m.rows());
  if (n > kMaxPermanentDimension) {
    throw std::invalid_argument("permanent dimension " + std::to_string(n) + " exceeds cap " +
                                std::to_string(kMaxPermanentDimension));
  }
  switch (n) {
    case 0:
      return Complex(1.0);
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
    default:
      break;
  }

  // perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij, visiting
  // subsets in Gray-code order so each step toggles one column.
  std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex(0.0));
  Complex total(0.0);
  std::uint32_t gray = 0;
  const std::uint32_t count = 1u << n;
  for (std::uint32_t k = 1; k < count; ++k) {
    const int col = std::countr_zero(k);
    const std::uint32_t bit = 1u << col;
    gray ^= bit;
    const double sign = (gray & bit) ? 1.0 : -1.0;
    Complex prod(1.0);
    for (int i = 0; i < n; ++i) {
      row_sums[static_cast<std::size_t>(i)] += sign * m(i, col);
      prod *= row_sums[static_cast<std::size_t>(i)];
    }
    total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
  }
  return (n % 2 == 0) ? total : -total;
}

}  // namespace pcnot
