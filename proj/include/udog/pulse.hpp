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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "udog/quadrature.hpp"
#include "udog/su2.hpp"

namespace udog {

/// Target rotation exp(i gamma_g n.sigma) with n at polar angle theta0 and
/// azimuth phi0.
struct GateTarget {
  double theta0 = 0.0;
  double phi0 = 0.0;
  double gamma_g = 0.0;

  Vec3 axis() const {
    return {std::sin(theta0) * std::cos(phi0), std::sin(theta0) * std::sin(phi0), std::cos(theta0)};
  }
  /// SU(2) frame whose first column is the eigenstate |n> of the target;
  /// the dressed states start there.
  Mat2 dressed_frame() const {
    const double c = std::cos(0.5 * theta0), s = std::sin(0.5 * theta0);
    return {{c, -std::polar(s, -phi0), std::polar(s, phi0), c}};
  }
  friend bool operator==(const GateTarget&, const GateTarget&) = default;
};

enum class ShapeTag { square, sine_squared, sampled_table };

/// Relative amplitude profile over a segment, as a function of the time
/// fraction u in [0, 1]. The profile is rescaled so its peak is 1.
class PulseShape {
 public:
  PulseShape() = default;

  static PulseShape square() { return PulseShape(); }
  static PulseShape sine_squared() {
    PulseShape s;
    s.tag_ = ShapeTag::sine_squared;
    return s;
  }
  /// Piecewise-linear table of (time fraction, relative amplitude).
  static PulseShape sampled_table(std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("sampled-table shape needs >= 2 points");
    double peak = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].second < 0.0) throw std::invalid_argument("sampled-table amplitude is negative");
      if (i > 0 && !(points[i].first > points[i - 1].first))
        throw std::invalid_argument("sampled-table time fractions must strictly increase");
      peak = std::max(peak, points[i].second);
    }
    if (std::abs(points.front().first) > 1e-12 || std::abs(points.back().first - 1.0) > 1e-12)
      throw std::invalid_argument("sampled-table time fractions must span [0, 1]");
    if (peak <= 0.0) throw std::invalid_argument("sampled-table amplitude is identically zero");
    PulseShape s;
    s.tag_ = ShapeTag::sampled_table;
    s.table_ = std::move(points);
    s.table_.front().first = 0.0;
    s.table_.back().first = 1.0;
    s.peak_ = peak;
    double acc = 0.0;
    s.cumulative_.push_back(0.0);
    for (std::size_t i = 1; i < s.table_.size(); ++i) {
      const auto& [u0, a0] = s.table_[i - 1];
      const auto& [u1, a1] = s.table_[i];
      acc += 0.5 * (a0 + a1) * (u1 - u0) / peak;
      s.cumulative_.push_back(acc);
    }
    return s;
  }

  ShapeTag tag() const { return tag_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }
  bool is_square() const { return tag_ == ShapeTag::square; }

  /// Peak-normalized amplitude at time fraction u.
  double amplitude(double u) const {
    switch (tag_) {
      case ShapeTag::square:
        return 1.0;
      case ShapeTag::sine_squared: {
        const double s = std::sin(kPi * u);
        return s * s;
      }
      case ShapeTag::sampled_table: {
        const std::size_t i = locate(u);
        const auto& [u0, a0] = table_[i];
        const auto& [u1, a1] = table_[i + 1];
        return (a0 + (a1 - a0) * (u - u0) / (u1 - u0)) / peak_;
      }
    }
    return 0.0;
  }

  /// Integral of amplitude over [0, u].
  double integral(double u) const {
    switch (tag_) {
      case ShapeTag::square:
        return u;
      case ShapeTag::sine_squared:
        return 0.5 * u - std::sin(2.0 * kPi * u) / (4.0 * kPi);
      case ShapeTag::sampled_table: {
        const std::size_t i = locate(u);
        const auto& [u0, a0] = table_[i];
        const auto& [u1, a1] = table_[i + 1];
        const double du = u - u0;
        const double slope = (a1 - a0) / (u1 - u0);
        return cumulative_[i] + (a0 * du + 0.5 * slope * du * du) / peak_;
      }
    }
    return 0.0;
  }

  /// Mean peak-normalized amplitude; duration = area / mean under Omega_max = 1.
  double mean() const { return integral(1.0); }

  friend bool operator==(const PulseShape& a, const PulseShape& b) {
    return a.tag_ == b.tag_ && a.table_ == b.table_;
  }

 private:
  std::size_t locate(double u) const {
    auto it = std::upper_bound(table_.begin(), table_.end(), u,
                               [](double v, const auto& p) { return v < p.first; });
    std::size_t i = static_cast<std::size_t>(std::distance(table_.begin(), it));
    i = i == 0 ? 0 : i - 1;
    return std::min(i, table_.size() - 2);
  }

  ShapeTag tag_ = ShapeTag::square;
  std::vector<std::pair<double, double>> table_;
  std::vector<double> cumulative_;
  double peak_ = 1.0;
};

inline std::string to_string(ShapeTag tag) {
  switch (tag) {
    case ShapeTag::square:
      return "square";
    case ShapeTag::sine_squared:
      return "sine-squared";
    case ShapeTag::sampled_table:
      return "sampled-table";
  }
  return "square";
}

/// Constant-phase drive segment. The rotation area is the integral of the
/// Rabi amplitude over the segment duration.
struct Segment {
  double area = 0.0;
  double phase = 0.0;
  double duration = 0.0;
  PulseShape shape;

  /// Rabi amplitude at local time tau in [0, duration].
  double amplitude(double tau) const {
    return area / (duration * shape.mean()) * shape.amplitude(tau / duration);
  }
  /// Area accumulated over [0, tau].
  double area_until(double tau) const {
    return area * shape.integral(tau / duration) / shape.mean();
  }
  Vec3 drive_axis() const { return {std::cos(phase), std::sin(phase), 0.0}; }

  friend bool operator==(const Segment& a, const Segment& b) = default;
};

/// Segment with peak amplitude 1; a square pi pulse lasts pi.
inline Segment make_segment(double area, double phase, PulseShape shape = PulseShape::square()) {
  if (area < 0.0) throw std::invalid_argument("segment area must be non-negative");
  const double duration = area / shape.mean();
  return {area, phase, duration, std::move(shape)};
}

struct PulseSequence {
  std::string scheme;
  GateTarget target;
  std::vector<Segment> segments;

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
  }
  double total_area() const {
    double a = 0.0;
    for (const auto& s : segments) a += s.area;
    return a;
  }
  /// Start time of each segment.
  std::vector<double> segment_offsets() const {
    std::vector<double> out;
    double t = 0.0;
    for (const auto& s : segments) {
      out.push_back(t);
      t += s.duration;
    }
    return out;
  }
  friend bool operator==(const PulseSequence&, const PulseSequence&) = default;
};

inline void validate(const PulseSequence& seq) {
  if (seq.segments.empty()) throw std::invalid_argument("pulse sequence is empty");
  for (const auto& s : seq.segments) {
    if (!(s.area > 0.0) || !(s.duration > 0.0))
      throw std::invalid_argument("segments must have positive area and duration");
  }
}

/// Control-plus-error Hamiltonian h(tau) = g.sigma inside a segment:
/// g = ((1+eps) Omega(tau) (cos phi, sin phi, 0) + (0, 0, delta)) / 2.
inline Vec3 hamiltonian_vector(const Segment& seg, double tau, double rabi_scale, double detuning) {
  const double a = 0.5 * rabi_scale * seg.amplitude(tau);
  return {a * std::cos(seg.phase), a * std::sin(seg.phase), 0.5 * detuning};
}

/// Tolerance on a propagator change when doubling the substep count of a
/// shaped segment under detuning.
inline constexpr double kRefineTol = 1e-13;

/// Propagator from local time tau0 to tau1 inside one segment. Closed form
/// whenever the Hamiltonian commutes with itself (square shapes, or no
/// detuning); otherwise fourth-order Magnus steps, doubled until converged.
inline Mat2 segment_evolution(const Segment& seg, double tau0, double tau1, double rabi_scale,
                              double detuning) {
  if (tau1 <= tau0) return Mat2::identity();
  if (seg.shape.is_square()) {
    return expm_pauli(hamiltonian_vector(seg, 0.5 * (tau0 + tau1), rabi_scale, detuning) *
                      (tau1 - tau0));
  }
  if (detuning == 0.0) {
    const double dA = seg.area_until(tau1) - seg.area_until(tau0);
    return expm_pauli(seg.drive_axis() * (0.5 * rabi_scale * dA));
  }
  const double span = tau1 - tau0;
  auto magnus4 = [&](int steps) {
    const double h = span / steps;
    const double off = h / (2.0 * std::sqrt(3.0));
    Mat2 u = Mat2::identity();
    for (int k = 0; k < steps; ++k) {
      const double mid = tau0 + (k + 0.5) * h;
      const Vec3 g1 = hamiltonian_vector(seg, mid - off, rabi_scale, detuning);
      const Vec3 g2 = hamiltonian_vector(seg, mid + off, rabi_scale, detuning);
      const Vec3 gen = (g1 + g2) * (0.5 * h) + cross(g2, g1) * (std::sqrt(3.0) / 6.0 * h * h);
      u = expm_pauli(gen) * u;
    }
    return u;
  };
  int steps = std::max(1, static_cast<int>(std::ceil(256.0 * span / seg.duration)));
  Mat2 coarse = magnus4(steps);
  for (int iter = 0; iter < 12; ++iter) {
    steps *= 2;
    Mat2 fine = magnus4(steps);
    const double change = max_abs_diff(fine, coarse);
    coarse = fine;
    if (change < kRefineTol) break;
  }
  return coarse;
}

/// Sampling of a sequence: each segment is split into `substeps` equal
/// intervals; every interval contributes its end point and, when `nodes` > 0,
/// that many Gauss-Legendre nodes carrying quadrature weights.
struct SampleSpec {
  int substeps = 1;
  int nodes = 16;
};

inline void validate(const SampleSpec& spec) {
  if (spec.substeps < 1) throw std::invalid_argument("sample spec needs >= 1 substep per segment");
  if (spec.nodes < 0) throw std::invalid_argument("sample spec node count must be >= 0");
}

enum class SampleKind { boundary, node };

struct TimedUnitary {
  double t = 0.0;
  Mat2 u;
  double weight = 0.0;  // quadrature weight; 0 on boundaries
  int segment = 0;
  double tau = 0.0;  // local time inside the segment
  SampleKind kind = SampleKind::boundary;
};

/// Time-ordered cumulative propagators U(t) under H = (1+eps) H_c + delta sz/2,
/// starting from U(0) = I.
inline std::vector<TimedUnitary> propagate(const PulseSequence& seq, double rabi_scale,
                                           double detuning, const SampleSpec& spec = {}) {
  validate(seq);
  validate(spec);
  if (!(rabi_scale > 0.0)) throw std::invalid_argument("propagate: rabi scale must be positive");
  std::vector<TimedUnitary> out;
  out.reserve(seq.segments.size() * static_cast<std::size_t>(spec.substeps) * (spec.nodes + 1) + 1);
  out.push_back({0.0, Mat2::identity(), 0.0, 0, 0.0, SampleKind::boundary});
  Mat2 u = Mat2::identity();
  double t0 = 0.0;
  for (std::size_t si = 0; si < seq.segments.size(); ++si) {
    const Segment& seg = seq.segments[si];
    const int seg_index = static_cast<int>(si);
    const double h = seg.duration / spec.substeps;
    for (int k = 0; k < spec.substeps; ++k) {
      const double a = k * h;
      const double b = (k + 1 == spec.substeps) ? seg.duration : (k + 1) * h;
      if (spec.nodes > 0) {
        for_each_gauss_node(a, b, spec.nodes, [&](double tau, double w) {
          out.push_back({t0 + tau, segment_evolution(seg, a, tau, rabi_scale, detuning) * u, w,
                         seg_index, tau, SampleKind::node});
        });
      }
      u = segment_evolution(seg, a, b, rabi_scale, detuning) * u;
      out.push_back({t0 + b, u, 0.0, seg_index, b, SampleKind::boundary});
    }
    t0 += seg.duration;
  }
  return out;
}

/// U(T) only.
inline Mat2 final_propagator(const PulseSequence& seq, double rabi_scale = 1.0,
                             double detuning = 0.0) {
  validate(seq);
  if (!(rabi_scale > 0.0)) throw std::invalid_argument("propagate: rabi scale must be positive");
  Mat2 u = Mat2::identity();
  for (const auto& seg : seq.segments)
    u = segment_evolution(seg, 0.0, seg.duration, rabi_scale, detuning) * u;
  return u;
}

/// Error-free control Hamiltonian H_c at a sample (segment, local time).
inline Vec3 control_vector(const PulseSequence& seq, int segment, double tau) {
  return hamiltonian_vector(seq.segments.at(static_cast<std::size_t>(segment)), tau, 1.0, 0.0);
}

}  // namespace udog
