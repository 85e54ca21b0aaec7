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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "udog/error_geometry.hpp"
#include "udog/least_squares.hpp"
#include "udog/parallel.hpp"
#include "udog/schemes.hpp"

namespace udog {

struct ResidualVector {
  std::vector<std::string> names;
  std::vector<double> values;

  void add(std::string name, double v) {
    names.push_back(std::move(name));
    values.push_back(v);
  }
  std::size_t size() const { return values.size(); }
  double norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
  double operator[](const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return values[i];
    throw std::out_of_range("no residual named " + name);
  }
};

/// Level-3 closure residuals in the closed form as usually printed: the rabi
/// pair followed by the detuning pair. For phi0 = 0 they agree with the
/// dressed-frame endpoints up to the sign of rabi_x and det_y; for phi0 != 0
/// the sin(phi0) terms carry the opposite sign (see closure_conditions_level3).
inline ResidualVector residuals_level3(const GateTarget& target, double xi1, double xi2) {
  const double t0 = target.theta0;
  const double p0 = target.phi0;
  const double g = target.gamma_g;
  const double a = 2.0 * g + p0;
  const double b = xi1 * g + p0;
  const double c = (1.0 + xi1 - xi2) * g + p0;
  const double d = (2.0 * xi1 - xi2) * g + p0;
  const double c2 = std::cos(0.5 * t0) * std::cos(0.5 * t0);
  const double s2 = std::sin(0.5 * t0) * std::sin(0.5 * t0);
  ResidualVector out;
  out.add("rabi_x", (-(kPi - t0) * std::sin(a) + t0 * std::sin(p0) + kPi * std::sin(b) -
                     kPi * std::sin(c) + kPi * std::sin(d)) /
                        2.0);
  out.add("rabi_y", (-(kPi - t0) * std::cos(a) - t0 * std::cos(p0) + kPi * std::cos(b) -
                     kPi * std::cos(c) + kPi * std::cos(d)) /
                        2.0);
  out.add("det_x", -c2 * std::cos(a) - std::cos(b) - s2 * std::cos(p0) + std::cos(c) + std::cos(d));
  out.add("det_y", c2 * std::sin(a) + std::sin(b) - s2 * std::sin(p0) - std::sin(c) - std::sin(d));
  return out;
}

/// Exact level-3 endpoints (x, y of both channels) of the square-pulse
/// sequence in the dressed frame of the target; the z components vanish
/// identically there. The rabi pair holds for any pulse shape, the detuning
/// pair only up to a common factor and only when theta0 = 0.
inline ResidualVector closure_conditions_level3(const GateTarget& target, double xi1, double xi2) {
  const double t0 = target.theta0;
  const double p0 = target.phi0;
  const double g = target.gamma_g;
  const double a = 2.0 * g + p0;
  const double b = xi1 * g + p0;
  const double c = (1.0 + xi1 - xi2) * g + p0;
  const double d = (2.0 * xi1 - xi2) * g + p0;
  const double c2 = std::cos(0.5 * t0) * std::cos(0.5 * t0);
  const double s2 = std::sin(0.5 * t0) * std::sin(0.5 * t0);
  ResidualVector out;
  out.add("rabi_x", ((kPi - t0) * std::sin(a) + t0 * std::sin(p0) - kPi * std::sin(b) +
                     kPi * std::sin(c) - kPi * std::sin(d)) /
                        2.0);
  out.add("rabi_y", (-(kPi - t0) * std::cos(a) - t0 * std::cos(p0) + kPi * std::cos(b) -
                     kPi * std::cos(c) + kPi * std::cos(d)) /
                        2.0);
  out.add("det_x", -c2 * std::cos(a) - s2 * std::cos(p0) - std::cos(b) + std::cos(c) + std::cos(d));
  out.add("det_y", -c2 * std::sin(a) - s2 * std::sin(p0) - std::sin(b) + std::sin(c) + std::sin(d));
  return out;
}

struct SolverOptions {
  double grid_min = -3.0;
  double grid_max = 3.0;
  double grid_step = 0.5;
  int level5_starts = 200;
  std::vector<int> level5_parity{0, 1, 0, 0, 1};
  double a2_weight = 0.3;  // initial weight of second-order terms, level 5
  int max_iterations = 200;
  std::uint64_t seed = 0;  // shifts the level-5 quasi-random starts
  SampleSpec quadrature{1, 12};
  unsigned threads = worker_count();
  double level3_tol = 1e-10;
  double level5_tol = 1e-7;
};

/// Level spec for a level (3 or 5) and its free parameters.
inline LevelSpec make_level(int level, const std::vector<double>& free, const SolverOptions& opt = {}) {
  if (level == 3) {
    if (free.size() != 2) throw std::invalid_argument("level-3 takes 2 free parameters");
    return LevelSpec::level3(free[0], free[1]);
  }
  if (level == 5) return LevelSpec::level5(free, opt.level5_parity);
  throw std::invalid_argument("closure solver supports levels 3 and 5");
}

/// Numerically integrated closure residuals of a built sequence in the
/// dressed frame: first-order endpoints (x, y) of both channels and, for
/// level 5, the second-order same-channel terms scaled by `a2_weight`.
inline ResidualVector closure_residuals(const GateTarget& target, int level,
                                        const std::vector<double>& free, const SolverOptions& opt = {},
                                        double a2_weight = 1.0) {
  const PulseSequence seq = build_geometric(target, make_level(level, free, opt));
  const int order = level == 5 ? 2 : 1;
  const MagnusTerms m = magnus_terms(seq, order, opt.quadrature);
  const Mat2 w = target.dressed_frame();
  const Vec3 rabi = in_frame(m.a1_rabi, w);
  const Vec3 det = in_frame(m.a1_detuning, w);
  ResidualVector out;
  out.add("rabi_x", rabi.x);
  out.add("rabi_y", rabi.y);
  out.add("det_x", det.x);
  out.add("det_y", det.y);
  if (order == 2) {
    const Vec3 a2r = in_frame(m.a2_rabi, w) * a2_weight;
    const Vec3 a2d = in_frame(m.a2_detuning, w) * a2_weight;
    out.add("a2_rabi_x", a2r.x);
    out.add("a2_rabi_y", a2r.y);
    out.add("a2_rabi_z", a2r.z);
    out.add("a2_det_x", a2d.x);
    out.add("a2_det_y", a2d.y);
    out.add("a2_det_z", a2d.z);
  }
  return out;
}

/// Residuals the solver drives to zero: closed form for level 3,
/// numerically integrated for level 5.
inline ResidualVector solver_residuals(const GateTarget& target, int level,
                                       const std::vector<double>& free, const SolverOptions& opt = {}) {
  if (level == 3) return closure_conditions_level3(target, free.at(0), free.at(1));
  return closure_residuals(target, level, free, opt);
}

struct XiCandidate {
  std::vector<double> xi;
  double residual_norm = 0.0;
  bool converged = false;
  std::vector<double> start;
};

struct XiSolution {
  int level = 3;
  std::vector<double> xi;  // free parameters
  double residual_norm = 0.0;
  bool converged = false;
  std::uint64_t seed = 0;
  std::vector<double> start;
  std::vector<XiCandidate> candidates;  // distinct converged solutions, tie-break order

  LevelSpec level_spec(const SolverOptions& opt = {}) const { return make_level(level, xi, opt); }
};

namespace detail {

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, out = 0.0;
  while (i > 0) {
    out += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return out;
}

/// Halton points in [lo, hi]^dim, randomly shifted modulo 1 when seed != 0.
inline std::vector<std::vector<double>> halton_starts(int count, int dim, double lo, double hi,
                                                     std::uint64_t seed) {
  static constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13};
  std::vector<double> shift(static_cast<std::size_t>(dim), 0.0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (auto& s : shift) s = uni(rng);
  }
  std::vector<std::vector<double>> out;
  for (int i = 1; i <= count; ++i) {
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (int d = 0; d < dim; ++d) {
      double u = radical_inverse(static_cast<std::uint64_t>(i), kPrimes[d]) + shift[static_cast<std::size_t>(d)];
      u -= std::floor(u);
      p[static_cast<std::size_t>(d)] = lo + (hi - lo) * u;
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Smallest max-norm first, then lexicographic.
inline bool tie_break_less(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = inf_norm(a), nb = inf_norm(b);
  if (std::abs(na - nb) > 1e-9) return na < nb;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-9) return a[i] < b[i];
  return false;
}

}  // namespace detail

/// Multistart damped Gauss-Newton for the free identity parameters.
inline XiSolution solve_xi(const GateTarget& target, int level, const SolverOptions& opt = {}) {
  if (level != 3 && level != 5) throw std::invalid_argument("solve_xi: level must be 3 or 5");
  std::vector<std::vector<double>> starts;
  if (level == 3) {
    const int steps = static_cast<int>(std::floor((opt.grid_max - opt.grid_min) / opt.grid_step + 1e-9));
    for (int i = 0; i <= steps; ++i)
      for (int j = 0; j <= steps; ++j)
        starts.push_back({opt.grid_min + i * opt.grid_step, opt.grid_min + j * opt.grid_step});
  } else {
    starts = detail::halton_starts(opt.level5_starts, 4, opt.grid_min, opt.grid_max, opt.seed);
  }
  const double tol = level == 3 ? opt.level3_tol : opt.level5_tol;

  GaussNewtonOptions gn;
  gn.max_iterations = opt.max_iterations;
  std::vector<XiCandidate> results(starts.size());
  parallel_for(
      starts.size(),
      [&](std::size_t i) {
        std::vector<double> x = starts[i];
        if (level == 5) {
          const auto weighted = [&](const std::vector<double>& v) {
            return closure_residuals(target, 5, v, opt, opt.a2_weight).values;
          };
          x = gauss_newton(weighted, x, gn).x;
        }
        const auto full = [&](const std::vector<double>& v) {
          return solver_residuals(target, level, v, opt).values;
        };
        const GaussNewtonResult res = gauss_newton(full, x, gn);
        results[i] = {res.x, res.residual_norm, res.residual_norm < tol, starts[i]};
      },
      opt.threads);

  XiSolution sol;
  sol.level = level;
  sol.seed = opt.seed;
  for (const auto& c : results) {
    if (!c.converged) continue;
    const bool dup = std::any_of(sol.candidates.begin(), sol.candidates.end(), [&](const XiCandidate& o) {
      double d = 0.0;
      for (std::size_t k = 0; k < o.xi.size(); ++k) d = std::max(d, std::abs(o.xi[k] - c.xi[k]));
      return d < 1e-6;
    });
    if (!dup) sol.candidates.push_back(c);
  }
  std::stable_sort(sol.candidates.begin(), sol.candidates.end(),
                   [](const XiCandidate& a, const XiCandidate& b) { return detail::tie_break_less(a.xi, b.xi); });
  const XiCandidate* best = nullptr;
  if (!sol.candidates.empty()) {
    best = &sol.candidates.front();
  } else {
    for (const auto& c : results)
      if (best == nullptr || c.residual_norm < best->residual_norm) best = &c;
  }
  if (best != nullptr) {
    sol.xi = best->xi;
    sol.residual_norm = best->residual_norm;
    sol.converged = best->converged;
    sol.start = best->start;
  }
  return sol;
}

}  // namespace udog
