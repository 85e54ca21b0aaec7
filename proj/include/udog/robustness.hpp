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
#include <string>
#include <vector>

#include "udog/bloch_path.hpp"
#include "udog/error_geometry.hpp"
#include "udog/parallel.hpp"
#include "udog/pulse.hpp"
#include "udog/schemes.hpp"

namespace udog {

/// 1 - |Tr(U_target^dagger U(T))|/2 under quasi-static errors.
inline double gate_infidelity(const PulseSequence& seq, double eps, double delta) {
  if (!(std::abs(eps) < 0.5) || !(std::abs(delta) < 0.5))
    throw std::invalid_argument("gate_infidelity: |eps| and |delta| must be below 0.5");
  return trace_infidelity(target_unitary(seq.target), final_propagator(seq, 1.0 + eps, delta));
}

inline double channel_infidelity(const PulseSequence& seq, Channel channel, double beta) {
  return channel == Channel::rabi ? gate_infidelity(seq, beta, 0.0) : gate_infidelity(seq, 0.0, beta);
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

class FitUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepFit {
  Channel channel = Channel::rabi;
  std::vector<double> beta;
  std::vector<double> infidelity;
  double slope = 0.0;
  int order = 0;                   // slope rounded to the nearest integer
  double coefficient = 0.0;        // 1 - F ~ coefficient * beta^order
  double free_coefficient = 0.0;   // intercept of the free-slope line
  double r_squared = 0.0;
  double residual = 0.0;  // rms of the log-log fit
  int points_used = 0;
};

/// Infidelities at or below this are treated as numerical noise and left out
/// of the fit.
inline constexpr double kInfidelityFloor = 1e-28;

/// Least-squares line through (log beta, log infidelity), then the
/// coefficient at the nearest integer order.
inline void fit_power_law(SweepFit& fit, double floor = kInfidelityFloor) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < fit.beta.size(); ++i) {
    if (fit.infidelity[i] > floor && fit.beta[i] > 0.0) {
      xs.push_back(std::log(fit.beta[i]));
      ys.push_back(std::log(fit.infidelity[i]));
    }
  }
  if (xs.size() < 2) throw FitUndefined("sweep fit undefined: fewer than two points above the numerical floor");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw FitUndefined("sweep fit undefined: degenerate beta grid");
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  fit.free_coefficient = std::exp(intercept);
  // the free intercept inherits slope noise amplified by |log beta|, so the
  // coefficient is refitted with the order pinned
  fit.order = static_cast<int>(std::lround(fit.slope));
  fit.coefficient = std::exp(my - fit.order * mx);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.residual = std::sqrt(ss_res / n);
  fit.points_used = static_cast<int>(xs.size());
}

inline SweepFit sweep_and_fit(const PulseSequence& seq, Channel channel, const std::vector<double>& betas,
                              double floor = kInfidelityFloor) {
  if (betas.size() < 10) throw std::invalid_argument("sweep_and_fit: need at least 10 grid points");
  for (double b : betas)
    if (!(b >= 1e-4 * (1 - 1e-12) && b <= 0.1 * (1 + 1e-12)))
      throw std::invalid_argument("sweep_and_fit: grid must lie within [1e-4, 0.1]");
  SweepFit fit;
  fit.channel = channel;
  fit.beta = betas;
  fit.infidelity.resize(betas.size());
  parallel_for(betas.size(), [&](std::size_t i) {
    fit.infidelity[i] = std::max(0.0, channel_infidelity(seq, channel, betas[i]));
  });
  fit_power_law(fit, floor);
  return fit;
}

/// D_km(t) = int_0^t <psi_k|V|psi_m> dt' in the dressed basis rebuilt from
/// the Bloch path; sampled at substep boundaries.
struct DMatrix {
  Channel channel = Channel::rabi;
  std::vector<double> t;
  std::vector<std::array<cplx, 4>> d;  // row-major D11, D12, D21, D22
  std::size_t pole_samples = 0;         // quadrature nodes that sat on a pole

  cplx at(std::size_t sample, int k, int m) const { return d[sample][static_cast<std::size_t>(2 * (k - 1) + (m - 1))]; }
};

inline DMatrix d_matrix(const PulseSequence& seq, Channel channel, const SampleSpec& spec = {}) {
  const BlochPath path = bloch_path(propagate(seq, 1.0, 0.0, spec), seq.target.dressed_frame());
  DMatrix out;
  out.channel = channel;
  std::array<cplx, 4> acc{};
  const double pole_tol = numeric_settings().pole_tol;
  for (const auto& s : path.samples) {
    if (s.kind == SampleKind::node) {
      if (std::sin(s.theta) < pole_tol) ++out.pole_samples;
      const auto psi = dressed_states(s);
      const Mat2 v = sigma_dot(generator(seq, channel, s.segment, s.tau));
      for (int k = 0; k < 2; ++k) {
        for (int m = 0; m < 2; ++m) {
          // <psi_k| V |psi_m>
          const cplx vm0 = v(0, 0) * psi[m][0] + v(0, 1) * psi[m][1];
          const cplx vm1 = v(1, 0) * psi[m][0] + v(1, 1) * psi[m][1];
          acc[static_cast<std::size_t>(2 * k + m)] += (std::conj(psi[k][0]) * vm0 + std::conj(psi[k][1]) * vm1) * s.weight;
        }
      }
    } else {
      out.t.push_back(s.t);
      out.d.push_back(acc);
    }
  }
  return out;
}

/// Leading-order infidelity (beta^2/4) sum_{k,m} |D_km(T)|^2.
inline double perturbative_infidelity(const DMatrix& d, double beta) {
  double s = 0.0;
  for (const auto& v : d.d.back()) s += std::norm(v);
  return 0.25 * beta * beta * s;
}

struct CorrespondenceReport {
  Channel channel = Channel::rabi;
  double max_deviation = 0.0;   // D entries vs path-based curve
  double max_direct_gap = 0.0;  // path-based vs direct curve
  double max_trace_gap = 0.0;   // |D22 + D11|
  std::size_t samples = 0;
};

/// Re D21 = x, Im D21 = y, D11 = z at every sample.
inline CorrespondenceReport verify_correspondence(const PulseSequence& seq, Channel channel,
                                                  const SampleSpec& spec = {}) {
  const BlochPath path = bloch_path(propagate(seq, 1.0, 0.0, spec), seq.target.dressed_frame());
  const ErrorCurve curve = error_curve_path(path, seq, channel);
  const ErrorCurve direct = detail::integrate_direct(seq, channel, spec);
  const Mat2 frame = seq.target.dressed_frame();
  const DMatrix d = d_matrix(seq, channel, spec);
  CorrespondenceReport rep;
  rep.channel = channel;
  rep.samples = curve.r.size();
  for (std::size_t i = 0; i < curve.r.size(); ++i) {
    const Vec3& r = curve.r[i];
    const cplx d21 = d.at(i, 2, 1);
    const cplx d11 = d.at(i, 1, 1);
    rep.max_deviation = std::max({rep.max_deviation, std::abs(d21.real() - r.x), std::abs(d21.imag() - r.y),
                                  std::abs(d11.real() - r.z), std::abs(d11.imag())});
    rep.max_direct_gap = std::max(rep.max_direct_gap, max_abs(in_frame(direct.r[i], frame) - r));
    rep.max_trace_gap = std::max(rep.max_trace_gap, std::abs(d.at(i, 2, 2) + d11));
  }
  return rep;
}

struct FilterFunction {
  Channel channel = Channel::rabi;
  std::vector<double> omega;
  std::vector<double> value;
};

/// F(w) = sum_j |int_0^T e^{iwt} R_j(t) dt|^2 with R the Pauli vector of
/// U_c^dagger V U_c.
inline FilterFunction filter_function(const PulseSequence& seq, Channel channel,
                                      const std::vector<double>& omegas, SampleSpec spec = {}) {
  for (double w : omegas)
    if (!(w >= 0.0)) throw std::invalid_argument("filter_function: frequencies must be non-negative");
  double w_max = 0.0;
  for (double w : omegas) w_max = std::max(w_max, w);
  double longest = 0.0;
  for (const auto& s : seq.segments) longest = std::max(longest, s.duration);
  // keep the oscillation per substep below ~1 rad
  spec.substeps = std::max(spec.substeps, static_cast<int>(std::ceil(w_max * longest / 1.0)));
  if (spec.nodes == 0) spec.nodes = 16;
  const auto props = propagate(seq, 1.0, 0.0, spec);
  std::vector<double> ts, ws;
  std::vector<Vec3> rs;
  for (const auto& s : props) {
    if (s.kind != SampleKind::node) continue;
    ts.push_back(s.t);
    ws.push_back(s.weight);
    rs.push_back(interaction_vector(s.u, generator(seq, channel, s.segment, s.tau)));
  }
  FilterFunction out;
  out.channel = channel;
  out.omega = omegas;
  out.value.resize(omegas.size());
  parallel_for(omegas.size(), [&](std::size_t k) {
    std::array<cplx, 3> acc{};
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const cplx ph = std::polar(ws[i], omegas[k] * ts[i]);
      acc[0] += ph * rs[i].x;
      acc[1] += ph * rs[i].y;
      acc[2] += ph * rs[i].z;
    }
    out.value[k] = std::norm(acc[0]) + std::norm(acc[1]) + std::norm(acc[2]);
  });
  return out;
}

}  // namespace udog
