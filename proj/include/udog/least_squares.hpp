// Copyright 2026 The UDOG Authors
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

#include <cmath>
#include <functional>
#include <vector>

namespace udog {

struct GaussNewtonOptions {
  int max_iterations = 200;
  double residual_tol = 1e-15;  // stop once |r| falls below this
  double step_tol = 1e-15;      // stop once the accepted step is this small (relative)
  double fd_step = 1e-7;
  int max_halvings = 30;
};

struct GaussNewtonResult {
  std::vector<double> x;
  std::vector<double> residual;
  double residual_norm = 0.0;
  int iterations = 0;
};

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Damped Gauss-Newton on min |r(x)|^2 with a forward-difference Jacobian.
/// Each step solves J dx = -r in the minimum-norm sense and is halved until
/// the residual decreases.
inline GaussNewtonResult gauss_newton(const ResidualFn& fn, std::vector<double> x,
                                      const GaussNewtonOptions& opt = {}) {
  const auto sq = [](const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
  };
  std::vector<double> r = fn(x);
  double cost = sq(r);
  const std::size_t n = x.size();
  const std::size_t m = r.size();
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (std::sqrt(cost) < opt.residual_tol) break;
    Eigen::MatrixXd jac(m, n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> xp = x;
      const double h = opt.fd_step * std::max(1.0, std::abs(x[j]));
      xp[j] += h;
      const std::vector<double> rp = fn(xp);
      for (std::size_t i = 0; i < m; ++i) jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (rp[i] - r[i]) / h;
    }
    Eigen::VectorXd rv(m);
    for (std::size_t i = 0; i < m; ++i) rv(static_cast<Eigen::Index>(i)) = r[i];
    const Eigen::VectorXd dx = jac.completeOrthogonalDecomposition().solve(-rv);

    double lambda = 1.0;
    bool accepted = false;
    std::vector<double> xn(n), rn;
    for (int h = 0; h <= opt.max_halvings; ++h, lambda *= 0.5) {
      for (std::size_t j = 0; j < n; ++j) xn[j] = x[j] + lambda * dx(static_cast<Eigen::Index>(j));
      rn = fn(xn);
      if (sq(rn) < cost) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    double step = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      step = std::max(step, std::abs(xn[j] - x[j]));
      scale = std::max(scale, std::abs(x[j]));
    }
    x = xn;
    r = rn;
    cost = sq(r);
    if (step <= opt.step_tol * std::max(1.0, scale)) {
      ++it;
      break;
    }
  }
  return {x, r, std::sqrt(cost), it};
}

}  // namespace udog
