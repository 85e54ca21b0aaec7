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

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "udog/pulse.hpp"
#include "udog/su2.hpp"

namespace udog {

struct BlochSample {
  double t = 0.0;
  double theta = 0.0;  // polar angle in [0, pi]
  double phi = 0.0;    // azimuth, unwrapped
  double f = 0.0;      // global phase, unwrapped
  double weight = 0.0;
  int segment = 0;
  double tau = 0.0;
  SampleKind kind = SampleKind::boundary;
};

/// Discrete azimuth jump across a pole. At the south pole the global phase
/// jumps by -dphi; at the north pole it is continuous.
struct PoleEvent {
  std::size_t index = 0;  // first sample after the jump
  double t = 0.0;
  bool south = false;
  double dphi = 0.0;
};

struct BlochPath {
  std::vector<BlochSample> samples;
  std::vector<PoleEvent> poles;
};

namespace detail {
inline double wrap_pi(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a;
}
inline double unwrap_near(double raw, double ref) { return ref + wrap_pi(raw - ref); }
}  // namespace detail

/// Inverts U W = [[e^{if} c, -e^{-i(f+phi)} s], [e^{i(f+phi)} s, e^{-if} c]]
/// with c = cos(theta/2), s = sin(theta/2), along a trajectory. W fixes the
/// initial dressed state (identity: the computational basis). The azimuth is
/// frozen while the path sits on a pole and every jump is logged.
inline BlochPath bloch_path(const std::vector<TimedUnitary>& props,
                            const Mat2& frame = Mat2::identity()) {
  if (props.empty()) throw std::invalid_argument("bloch_path: empty trajectory");
  if (max_abs_diff(props.front().u, Mat2::identity()) > 1e-10)
    throw std::invalid_argument("bloch_path: trajectory must start at the identity");
  if (!is_unitary(frame)) throw std::invalid_argument("bloch_path: frame must be unitary");
  const double pole_tol = numeric_settings().pole_tol;

  BlochPath path;
  path.samples.reserve(props.size());
  bool have_phi = false;
  bool prev_on_pole = true;
  bool prev_south = false;
  double f = 0.0;
  double f_plus_phi = 0.0;  // arg U10
  double phi = 0.0;

  auto define_phi = [&](double value) {
    phi = value;
    for (auto& s : path.samples) s.phi = phi;
    have_phi = true;
  };

  for (std::size_t i = 0; i < props.size(); ++i) {
    const Mat2 u = props[i].u * frame;
    const double theta = 2.0 * std::atan2(std::abs(u(1, 0)), std::abs(u(0, 0)));
    const bool on_pole = std::sin(theta) < pole_tol;
    const bool south = theta > 0.5 * kPi;

    if (on_pole && !south) {
      f = detail::unwrap_near(std::arg(u(0, 0)), f);
      f_plus_phi = f + phi;
    } else if (on_pole) {
      if (!have_phi) define_phi(detail::wrap_pi(std::arg(u(1, 0)) - f));
      f_plus_phi = detail::unwrap_near(std::arg(u(1, 0)), f_plus_phi);
      f = f_plus_phi - phi;
    } else {
      const double f_new = detail::unwrap_near(std::arg(u(0, 0)), f);
      const double g_new = detail::unwrap_near(std::arg(u(1, 0)), f_plus_phi);
      if (!have_phi) {
        define_phi(detail::wrap_pi(g_new - f_new));
      } else {
        const double dphi = detail::wrap_pi((g_new - f_new) - phi);
        if (prev_on_pole && i > 0) {
          // leaving a pole: the frozen azimuth snaps to its new value
          if (dphi != 0.0) path.poles.push_back({i, props[i].t, prev_south, dphi});
        } else if (std::abs(dphi) > 0.5 * kPi) {
          // pole crossed between two off-pole samples; the member of
          // (f, f + phi) that stayed continuous identifies which pole
          const bool crossed_south = std::abs(f_new - f) > std::abs(g_new - f_plus_phi);
          path.poles.push_back({i, props[i].t, crossed_south, dphi});
        }
        phi += dphi;
      }
      if (south) {
        f_plus_phi = g_new;
        f = f_plus_phi - phi;
      } else {
        f = f_new;
        f_plus_phi = f + phi;
      }
    }
    prev_on_pole = on_pole;
    prev_south = south;
    path.samples.push_back({props[i].t, theta, phi, f, props[i].weight, props[i].segment,
                            props[i].tau, props[i].kind});
  }
  return path;
}

/// Dressed states |psi_1> = e^{if}(c, e^{i phi} s), |psi_2> = e^{-if}(-e^{-i phi} s, c).
inline std::array<std::array<cplx, 2>, 2> dressed_states(const BlochSample& s) {
  const double c = std::cos(0.5 * s.theta);
  const double sn = std::sin(0.5 * s.theta);
  const cplx ef = std::polar(1.0, s.f);
  const cplx efp = std::polar(1.0, s.f + s.phi);
  return {{{ef * c, efp * sn}, {-std::conj(efp) * sn, std::conj(ef) * c}}};
}

/// Propagator rebuilt from a path sample (columns are the dressed states).
inline Mat2 rebuild_unitary(const BlochSample& s) {
  const auto psi = dressed_states(s);
  return {{psi[0][0], psi[1][0], psi[0][1], psi[1][1]}};
}

/// -1/2 * integral of (1 - cos theta) dphi along the path: trapezoid rule on
/// the smooth azimuth motion, exact contributions for logged pole jumps.
inline double geometric_phase(const BlochPath& path) {
  double total = 0.0;
  std::size_t next_pole = 0;
  for (std::size_t i = 1; i < path.samples.size(); ++i) {
    const BlochSample& a = path.samples[i - 1];
    const BlochSample& b = path.samples[i];
    double dphi = b.phi - a.phi;
    while (next_pole < path.poles.size() && path.poles[next_pole].index == i) {
      const PoleEvent& ev = path.poles[next_pole];
      dphi -= ev.dphi;
      total -= 0.5 * (ev.south ? 2.0 : 0.0) * ev.dphi;
      ++next_pole;
    }
    const double weight = 0.5 * ((1.0 - std::cos(a.theta)) + (1.0 - std::cos(b.theta)));
    total -= 0.5 * weight * dphi;
  }
  return total;
}

}  // namespace udog
