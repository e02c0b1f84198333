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

#include <span>
#include <string>

namespace pcnot {

struct FitOptions {
  /// Fit the angular frequency k instead of pinning the 180 deg period.
  bool free_period = false;
  int max_iterations = 200;
};

/// Fit of y = A cos^2(k (theta - phi)) + C.
struct FitResult {
  double amplitude = 0.0;
  double offset = 0.0;
  double phase_deg = 0.0;
  double frequency = 1.0;
  /// A / (A + 2C): fringe half-swing over mean level, (max - min) / (max + min).
  double visibility = 0.0;
  double amplitude_stderr = 0.0;
  double offset_stderr = 0.0;
  double phase_stderr_deg = 0.0;
  double frequency_stderr = 0.0;
  double visibility_stderr = 0.0;
  /// sqrt(sum of weighted squared residuals)
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Empty unless the fit is flagged.
  std::string diagnostics;
};

/// Levenberg-Marquardt with an analytic Jacobian, started from the linear
/// least-squares fit of {1, cos 2t, sin 2t}. `sigma`, when given, holds one
/// standard deviation per point. Reported A is non-negative and phi lies in
/// [0, 180/k). Standard errors come from s^2 (J^T W J)^-1 with s^2 the
/// reduced chi-square.
FitResult fit_malus(std::span<const double> theta_deg, std::span<const double> y,
                    std::span<const double> sigma = {}, const FitOptions& options = {});

}  // namespace pcnot
