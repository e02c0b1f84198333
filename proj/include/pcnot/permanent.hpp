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

#include <Eigen/Dense>

#include "pcnot/fock.hpp"

namespace pcnot {

inline constexpr int kMaxPermanentDimension = 16;

/// Matrix permanent by Ryser's inclusion-exclusion formula with Gray-code
/// ordering of column subsets, O(2^n n). The 0x0 permanent is 1.
/// Throws std::invalid_argument for non-square input and for n > 16.
Complex permanent(const Eigen::MatrixXcd& m);

}  // namespace pcnot
