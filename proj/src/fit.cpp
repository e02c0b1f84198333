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

#include "pcnot/fit.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "pcnot/errors.hpp"

namespace pcnot {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

// Parameters: A, phi (rad), C, and k when the period is free.
struct Model {
  std::span<const double> theta;  // radians
  std::span<const double> y;
  std::vector<double> w;          // 1 / sigma
  bool free_period;

  Eigen::Index size() const { return free_period ? 4 : 3; }

  double k(const Eigen::VectorXd& p) const { return free_period ? p(3) : 1.0; }

  Eigen::VectorXd residuals(const Eigen::VectorXd& p) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double c = std::cos(k(p) * (theta[i] - p(1)));
      r(static_cast<Eigen::Index>(i)) = w[i] * (p(0) * c * c + p(2) - y[i]);
    }
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd j(static_cast<Eigen::Index>(y.size()), size());
    const double kk = k(p);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double d = theta[i] - p(1);
      const double u = kk * d;
      const double c = std::cos(u);
      const double s2 = std::sin(2.0 * u);
      j(row, 0) = w[i] * c * c;
      j(row, 1) = w[i] * p(0) * kk * s2;
      j(row, 2) = w[i];
      if (free_period) j(row, 3) = -w[i] * p(0) * s2 * d;
    }
    return j;
  }
};

}  // namespace

FitResult fit_malus(std::span<const double> theta_deg, std::span<const double> y,
                    std::span<const double> sigma, const FitOptions& options) {
  const std::size_t n = y.size();
  if (theta_deg.size() != n) throw ConfigError("fit needs one angle per data point");
  if (!sigma.empty() && sigma.size() != n) throw ConfigError("fit needs one sigma per data point");

  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = theta_deg[i] * kDeg;
  Model m{theta, y, std::vector<double>(n, 1.0), options.free_period};
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0.0)) throw ConfigError("fit sigma must be positive");
    m.w[i] = 1.0 / sigma[i];
  }
  const Eigen::Index np = m.size();
  if (static_cast<Eigen::Index>(n) < np) throw ConfigError("too few points for the fit");

  // Linear start: y = c0 + c1 cos 2t + c2 sin 2t.
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd yw(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    x(r, 0) = m.w[i];
    x(r, 1) = m.w[i] * std::cos(2.0 * theta[i]);
    x(r, 2) = m.w[i] * std::sin(2.0 * theta[i]);
    yw(r) = m.w[i] * y[i];
  }
  const Eigen::Vector3d lin = x.colPivHouseholderQr().solve(yw);
  Eigen::VectorXd p(np);
  p(0) = 2.0 * std::hypot(lin(1), lin(2));
  p(1) = 0.5 * std::atan2(lin(2), lin(1));
  p(2) = lin(0) - 0.5 * p(0);
  if (options.free_period) p(3) = 1.0;

  FitResult out;
  double lambda = 1e-3;
  Eigen::VectorXd r = m.residuals(p);
  double cost = r.squaredNorm();
  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    const Eigen::MatrixXd j = m.jacobian(p);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    bool accepted = false;
    Eigen::VectorXd step;
    while (lambda < 1e12) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      step = a.ldlt().solve(-g);
      const Eigen::VectorXd trial = p + step;
      const Eigen::VectorXd rt = m.residuals(trial);
      const double ct = rt.squaredNorm();
      if (ct <= cost) {
        p = trial;
        r = rt;
        const double drop = cost - ct;
        cost = ct;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        if (step.norm() <= 1e-12 * (1.0 + p.norm()) || drop <= 1e-15 * (cost + 1e-300)) {
          out.converged = true;
        }
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No downhill step left: at a minimum up to rounding.
      out.converged = g.norm() <= 1e-8 * (1.0 + std::sqrt(cost));
      if (!out.converged) out.diagnostics = "damping exhausted before convergence";
      break;
    }
    if (out.converged) break;
  }
  if (!out.converged && out.diagnostics.empty()) {
    out.diagnostics = "no convergence after " + std::to_string(options.max_iterations) + " iterations";
  }

  const Eigen::MatrixXd j = m.jacobian(p);
  const auto dof = static_cast<double>(static_cast<Eigen::Index>(n) - np);
  const double s2 = dof > 0 ? cost / dof : 0.0;
  Eigen::MatrixXd cov = s2 * (j.transpose() * j).completeOrthogonalDecomposition().pseudoInverse();

  double a = p(0), phi = p(1), c = p(2);
  const double k = m.k(p);
  if (a < 0.0) {
    // A cos^2(u) + C = |A| cos^2(u - 90 deg) + (C + A)
    c += a;
    a = -a;
    phi += 0.5 * kPi / k;
    // Var(C + A) = Var C + Var A + 2 Cov(A, C)
    const double var_c = cov(2, 2) + cov(0, 0) + 2.0 * cov(0, 2);
    const double cov_ac = -(cov(0, 2) + cov(0, 0));
    cov(2, 2) = var_c;
    cov(0, 2) = cov(2, 0) = cov_ac;
  }
  const double period = kPi / std::abs(k);
  phi = std::fmod(phi, period);
  if (phi < 0.0) phi += period;
  if (period - phi < 1e-12 * period) phi = 0.0;

  out.amplitude = a;
  out.offset = c;
  out.phase_deg = phi / kDeg;
  out.frequency = k;
  out.amplitude_stderr = std::sqrt(std::max(cov(0, 0), 0.0));
  out.phase_stderr_deg = std::sqrt(std::max(cov(1, 1), 0.0)) / kDeg;
  out.offset_stderr = std::sqrt(std::max(cov(2, 2), 0.0));
  if (options.free_period) out.frequency_stderr = std::sqrt(std::max(cov(3, 3), 0.0));
  const double den = a + 2.0 * c;
  out.visibility = den != 0.0 ? a / den : 0.0;
  if (den != 0.0) {
    const double dva = 2.0 * c / (den * den);
    const double dvc = -2.0 * a / (den * den);
    const double var = dva * dva * cov(0, 0) + dvc * dvc * cov(2, 2) + 2.0 * dva * dvc * cov(0, 2);
    out.visibility_stderr = std::sqrt(std::max(var, 0.0));
  }
  out.residual_norm = std::sqrt(cost);
  return out;
}

}  // namespace pcnot
