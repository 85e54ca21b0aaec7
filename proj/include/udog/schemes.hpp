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

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "udog/pulse.hpp"
#include "udog/su2.hpp"

namespace udog {

/// Phases of an n-pulse pi block: sub-pulse k carries
/// phi0 + xi[k] gamma_g + pi/2 + parity[k] pi.
struct LevelSpec {
  int n = 1;
  std::vector<double> xi{1.0};
  std::vector<int> parity{0};

  static LevelSpec level1() { return {}; }

  static LevelSpec level3(double xi1, double xi2) {
    return {3, {xi1, xi2, 1.0 + xi2 - xi1}, {0, 0, 1}};
  }

  /// Four free values; the fifth follows from the alternating-sum constraint.
  static LevelSpec level5(const std::vector<double>& free, std::vector<int> parity = {0, 1, 0, 0, 1}) {
    if (free.size() != 4) throw std::invalid_argument("level-5 spec takes 4 free parameters");
    const double last = 1.0 - (free[0] - free[1] + free[2] - free[3]);
    return {5, {free[0], free[1], free[2], free[3], last}, std::move(parity)};
  }

  double alternating_sum() const {
    double s = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) s += (k % 2 == 0 ? 1.0 : -1.0) * xi[k];
    return s;
  }
};

inline void validate(const LevelSpec& level) {
  if (level.n < 1 || level.n % 2 == 0)
    throw std::invalid_argument("level-n identity requires an odd positive n");
  if (level.xi.size() != static_cast<std::size_t>(level.n) ||
      level.parity.size() != static_cast<std::size_t>(level.n))
    throw std::invalid_argument("level spec vectors must have length n");
  for (int p : level.parity)
    if (p != 0 && p != 1) throw std::invalid_argument("parity entries must be 0 or 1");
  if (std::abs(level.alternating_sum() - 1.0) > 1e-12)
    throw std::invalid_argument("level spec violates the alternating-sum constraint");
}

/// exp(i gamma_g n.sigma).
inline Mat2 target_unitary(const GateTarget& target) {
  return expm_su2(target.axis(), -2.0 * target.gamma_g);
}

inline std::string scheme_name(const LevelSpec& level) {
  return level.n == 1 ? "ngqc-level1" : "udog-level" + std::to_string(level.n);
}

/// Outer rotations R(theta0, phi0 - pi/2) and R(pi - theta0, phi0 - pi/2)
/// around a level-n pi block. Zero-area outer rotations are omitted.
inline PulseSequence build_geometric(const GateTarget& target, const LevelSpec& level,
                                     const PulseShape& shape = PulseShape::square()) {
  validate(level);
  PulseSequence seq;
  seq.scheme = scheme_name(level);
  seq.target = target;
  const double outer_phase = target.phi0 - 0.5 * kPi;
  if (target.theta0 > 0.0) seq.segments.push_back(make_segment(target.theta0, outer_phase, shape));
  for (int k = 0; k < level.n; ++k) {
    const double phase = target.phi0 + level.xi[k] * target.gamma_g + 0.5 * kPi + level.parity[k] * kPi;
    seq.segments.push_back(make_segment(kPi, phase, shape));
  }
  if (kPi - target.theta0 > 0.0)
    seq.segments.push_back(make_segment(kPi - target.theta0, outer_phase, shape));
  return seq;
}

/// exp(-i alpha sz / 2) as Rx(pi/2) Ry(alpha) Rx(-pi/2).
inline PulseSequence build_dynamical_euler(double alpha, const PulseShape& shape = PulseShape::square()) {
  if (std::abs(alpha) > 2.0 * kPi) throw std::invalid_argument("euler baseline needs |alpha| <= 2 pi");
  PulseSequence seq;
  seq.scheme = "dynamical-euler";
  seq.target = {0.0, 0.0, -0.5 * alpha};
  seq.segments.push_back(make_segment(0.5 * kPi, kPi, shape));
  if (alpha != 0.0)
    seq.segments.push_back(make_segment(std::abs(alpha), alpha > 0 ? 0.5 * kPi : -0.5 * kPi, shape));
  seq.segments.push_back(make_segment(0.5 * kPi, 0.0, shape));
  return seq;
}

struct NamedGate {
  std::string_view name;
  GateTarget target;
};

inline constexpr NamedGate kNamedGates[] = {
    {"S", {0.0, 0.0, -kPi / 4}},   {"T", {0.0, 0.0, -kPi / 8}},    {"Z", {0.0, 0.0, -kPi / 2}},
    {"X", {kPi / 2, 0.0, kPi / 2}}, {"H", {kPi / 4, 0.0, kPi / 2}},
};

inline std::optional<GateTarget> named_gate(std::string_view name) {
  for (const auto& g : kNamedGates)
    if (g.name == name) return g.target;
  return std::nullopt;
}

}  // namespace udog
