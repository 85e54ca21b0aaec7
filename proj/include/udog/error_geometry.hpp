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
#include <stdexcept>
#include <string>
#include <vector>

#include "udog/bloch_path.hpp"
#include "udog/pulse.hpp"
#include "udog/su2.hpp"

namespace udog {

/// Quasi-static error channels: rabi perturbs by eps * H_c(t), detuning by
/// delta * sz / 2.
enum class Channel { rabi, detuning };

inline std::string to_string(Channel c) { return c == Channel::rabi ? "rabi" : "detuning"; }

inline Channel parse_channel(const std::string& s) {
  if (s == "rabi") return Channel::rabi;
  if (s == "detuning") return Channel::detuning;
  throw std::invalid_argument("unknown error channel '" + s + "'");
}

/// Error generator V(t) = g.sigma at a sample.
inline Vec3 generator(const PulseSequence& seq, Channel channel, int segment, double tau) {
  if (channel == Channel::detuning) return {0.0, 0.0, 0.5};
  return control_vector(seq, segment, tau);
}

/// Pauli vector of U^dagger (g.sigma) U.
inline Vec3 interaction_vector(const Mat2& u, const Vec3& g) {
  return pauli_components(u.adjoint() * sigma_dot(g) * u).v;
}

/// Running first-order Magnus error operator A1(t) = r(t).sigma, sampled at
/// substep boundaries. `distance` is the endpoint gap in the doubled (Bloch)
/// convention, 2 |r(T)|.
struct ErrorCurve {
  Channel channel = Channel::rabi;
  std::vector<double> t;
  std::vector<Vec3> r;

  Vec3 endpoint() const { return r.empty() ? Vec3{} : r.back(); }
  double distance() const { return 2.0 * norm(endpoint()); }
};

namespace detail {

inline ErrorCurve integrate_direct(const PulseSequence& seq, Channel channel, const SampleSpec& spec) {
  const auto props = propagate(seq, 1.0, 0.0, spec);
  ErrorCurve curve;
  curve.channel = channel;
  Vec3 acc;
  for (const auto& s : props) {
    if (s.kind == SampleKind::node) {
      acc += interaction_vector(s.u, generator(seq, channel, s.segment, s.tau)) * s.weight;
    } else {
      curve.t.push_back(s.t);
      curve.r.push_back(acc);
    }
  }
  return curve;
}

inline bool all_square(const PulseSequence& seq) {
  for (const auto& s : seq.segments)
    if (!s.shape.is_square()) return false;
  return true;
}

}  // namespace detail

/// r(t) from direct quadrature of U_c^dagger V U_c. Shaped segments are
/// refined by doubling the substep count until the endpoint moves by less
/// than 1e-10 (kinks in sampled tables converge only algebraically).
inline ErrorCurve error_curve_direct(const PulseSequence& seq, Channel channel,
                                     SampleSpec spec = {}) {
  validate(spec);
  if (spec.nodes == 0) throw std::invalid_argument("error_curve_direct needs quadrature nodes");
  ErrorCurve curve = detail::integrate_direct(seq, channel, spec);
  if (detail::all_square(seq)) return curve;
  for (int iter = 0; iter < 12; ++iter) {
    spec.substeps *= 2;
    ErrorCurve finer = detail::integrate_direct(seq, channel, spec);
    const double change = max_abs(finer.endpoint() - curve.endpoint());
    curve = std::move(finer);
    if (change < 1e-10) break;
  }
  return curve;
}

/// Pauli vector r expressed in a rotated frame: components of W^dagger (r.sigma) W.
inline Vec3 in_frame(const Vec3& r, const Mat2& w) {
  return pauli_components(w.adjoint() * sigma_dot(r) * w).v;
}

/// Direct curve seen from the dressed frame of the sequence target, where the
/// initial dressed state is the target eigenstate |n>.
inline ErrorCurve error_curve_dressed(const PulseSequence& seq, Channel channel,
                                      const SampleSpec& spec = {}) {
  ErrorCurve curve = error_curve_direct(seq, channel, spec);
  const Mat2 w = seq.target.dressed_frame();
  for (auto& r : curve.r) r = in_frame(r, w);
  return curve;
}

/// Integrand of the error curve written in path variables (theta, phi, f)
/// and the drive (Omega, varphi).
inline Vec3 path_integrand(const BlochSample& s, const PulseSequence& seq, Channel channel) {
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  const double psi = 2.0 * s.f + s.phi;
  if (channel == Channel::detuning)
    return {-0.5 * st * std::cos(psi), -0.5 * st * std::sin(psi), 0.5 * ct};
  const Segment& seg = seq.segments.at(static_cast<std::size_t>(s.segment));
  const double half_omega = 0.5 * seg.amplitude(s.tau);
  const double lag = seg.phase - s.phi;
  const double sl = std::sin(lag);
  const double cl = std::cos(lag);
  return {-half_omega * (sl * std::sin(psi) - ct * cl * std::cos(psi)),
          half_omega * (sl * std::cos(psi) + ct * cl * std::sin(psi)), half_omega * st * cl};
}

/// r(t) from the closed-form path integrands, on the path's own quadrature grid.
inline ErrorCurve error_curve_path(const BlochPath& path, const PulseSequence& seq, Channel channel) {
  validate(seq);
  if (path.samples.empty()) throw std::invalid_argument("error_curve_path: empty path");
  const double t_end = seq.total_duration();
  if (std::abs(path.samples.back().t - t_end) > 1e-9 * std::max(1.0, t_end))
    throw std::invalid_argument("error_curve_path: path does not span the sequence");
  ErrorCurve curve;
  curve.channel = channel;
  Vec3 acc;
  for (const auto& s : path.samples) {
    if (s.segment < 0 || static_cast<std::size_t>(s.segment) >= seq.segments.size())
      throw std::invalid_argument("error_curve_path: sample refers to a missing segment");
    if (s.kind == SampleKind::node) {
      acc += path_integrand(s, seq, channel) * s.weight;
    } else {
      curve.t.push_back(s.t);
      curve.r.push_back(acc);
    }
  }
  return curve;
}

/// First- and second-order Magnus error terms. Second order uses
/// A2 = -(i/2) int_0^T dt1 int_0^t1 dt2 [H_I(t1), H_I(t2)], which for Pauli
/// vectors reduces to int_0^T R(t) x r(t) dt.
struct MagnusTerms {
  Vec3 a1_rabi;
  Vec3 a1_detuning;
  Vec3 a2_rabi;
  Vec3 a2_detuning;
  Vec3 a2_cross;  // rabi-detuning mixed term
  int order = 1;

  Mat2 a1(Channel c) const { return sigma_dot(c == Channel::rabi ? a1_rabi : a1_detuning); }
  Mat2 a2(Channel c) const { return sigma_dot(c == Channel::rabi ? a2_rabi : a2_detuning); }
};

inline MagnusTerms magnus_terms(const PulseSequence& seq, int order, SampleSpec spec = {}) {
  if (order != 1 && order != 2) throw std::invalid_argument("magnus order must be 1 or 2");
  validate(seq);
  validate(spec);
  if (spec.nodes == 0) throw std::invalid_argument("magnus_terms needs quadrature nodes");
  if (!detail::all_square(seq)) spec.substeps = std::max(spec.substeps, 8);
  MagnusTerms out;
  out.order = order;
  const Vec3 zdet{0.0, 0.0, 0.5};
  Mat2 u = Mat2::identity();
  Vec3 r_rabi, r_det;
  for (std::size_t si = 0; si < seq.segments.size(); ++si) {
    const Segment& seg = seq.segments[si];
    const int idx = static_cast<int>(si);
    const double h = seg.duration / spec.substeps;
    for (int k = 0; k < spec.substeps; ++k) {
      const double a = k * h;
      const double b = (k + 1 == spec.substeps) ? seg.duration : (k + 1) * h;
      auto rates = [&](double tau, Vec3& rabi, Vec3& det) {
        const Mat2 ut = segment_evolution(seg, a, tau, 1.0, 0.0) * u;
        rabi = interaction_vector(ut, control_vector(seq, idx, tau));
        det = interaction_vector(ut, zdet);
      };
      Vec3 sum_rabi, sum_det;
      for_each_gauss_node(a, b, spec.nodes, [&](double tau, double w) {
        Vec3 rabi, det;
        rates(tau, rabi, det);
        sum_rabi += rabi * w;
        sum_det += det * w;
        if (order == 2) {
          Vec3 in_rabi = r_rabi, in_det = r_det;
          for_each_gauss_node(a, tau, spec.nodes, [&](double tau2, double w2) {
            Vec3 r2, d2;
            rates(tau2, r2, d2);
            in_rabi += r2 * w2;
            in_det += d2 * w2;
          });
          out.a2_rabi += cross(rabi, in_rabi) * w;
          out.a2_detuning += cross(det, in_det) * w;
          out.a2_cross += (cross(rabi, in_det) + cross(det, in_rabi)) * w;
        }
      });
      r_rabi += sum_rabi;
      r_det += sum_det;
      u = segment_evolution(seg, a, b, 1.0, 0.0) * u;
    }
  }
  out.a1_rabi = r_rabi;
  out.a1_detuning = r_det;
  return out;
}

}  // namespace udog
