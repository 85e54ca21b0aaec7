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
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace udog {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Absolute tolerances shared by the whole library. Mutate before starting
/// any computation; the library only reads it afterwards.
struct NumericSettings {
  double unitary_tol = 1e-12;
  double hermitian_tol = 1e-12;
  double axis_tol = 1e-12;
  double pole_tol = 1e-9;  // sin(theta) below this counts as sitting on a pole
};

inline NumericSettings& numeric_settings() {
  static NumericSettings settings;
  return settings;
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double max_abs(const Vec3& a) {
  return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)});
}

/// Complex 2x2 matrix, row-major.
struct Mat2 {
  std::array<cplx, 4> e{};

  constexpr cplx& operator()(int r, int c) { return e[2 * r + c]; }
  constexpr const cplx& operator()(int r, int c) const { return e[2 * r + c]; }

  static constexpr Mat2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
  static constexpr Mat2 zero() { return {}; }

  Mat2& operator+=(const Mat2& o) {
    for (int i = 0; i < 4; ++i) e[i] += o.e[i];
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    for (int i = 0; i < 4; ++i) e[i] -= o.e[i];
    return *this;
  }
  Mat2& operator*=(cplx s) {
    for (auto& v : e) v *= s;
    return *this;
  }
  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend Mat2 operator*(Mat2 a, cplx s) { return a *= s; }
  friend Mat2 operator*(cplx s, Mat2 a) { return a *= s; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {{a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
             a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]}};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;

  Mat2 adjoint() const {
    return {{std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])}};
  }
  cplx trace() const { return e[0] + e[3]; }
  cplx det() const { return e[0] * e[3] - e[1] * e[2]; }
};

inline double max_abs(const Mat2& m) {
  double out = 0.0;
  for (const auto& v : m.e) out = std::max(out, std::abs(v));
  return out;
}

inline double max_abs_diff(const Mat2& a, const Mat2& b) { return max_abs(a - b); }

inline bool is_unitary(const Mat2& u, double tol = numeric_settings().unitary_tol) {
  return max_abs(u.adjoint() * u - Mat2::identity()) < tol;
}

inline bool is_hermitian(const Mat2& h, double tol = numeric_settings().hermitian_tol) {
  return max_abs(h - h.adjoint()) < tol;
}

namespace pauli {
inline constexpr Mat2 I{{1.0, 0.0, 0.0, 1.0}};
inline constexpr Mat2 X{{0.0, 1.0, 1.0, 0.0}};
inline constexpr Mat2 Y{{0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}};
inline constexpr Mat2 Z{{1.0, 0.0, 0.0, -1.0}};
}  // namespace pauli

/// Hermitian matrix c0*I + v.sigma, or its Pauli coefficients.
struct PauliVec {
  Vec3 v;
  double c0 = 0.0;
};

/// v.sigma (traceless).
inline Mat2 sigma_dot(const Vec3& v) {
  return {{cplx(v.z, 0.0), cplx(v.x, -v.y), cplx(v.x, v.y), cplx(-v.z, 0.0)}};
}

inline Mat2 recompose(const PauliVec& p) { return sigma_dot(p.v) + Mat2::identity() * p.c0; }

/// Pauli coefficients of an arbitrary 2x2 matrix, real parts only. Used on
/// matrices that are Hermitian by construction (no validation).
inline PauliVec pauli_components(const Mat2& h) {
  return {{0.5 * (h.e[1].real() + h.e[2].real()), 0.5 * (h.e[2].imag() - h.e[1].imag()),
           0.5 * (h.e[0].real() - h.e[3].real())},
          0.5 * (h.e[0].real() + h.e[3].real())};
}

inline PauliVec pauli_decompose(const Mat2& h) {
  if (!is_hermitian(h)) throw std::invalid_argument("pauli_decompose: matrix is not Hermitian");
  return pauli_components(h);
}

/// cos(angle/2) I - i sin(angle/2) axis.sigma
inline Mat2 expm_su2(const Vec3& axis, double angle) {
  if (std::abs(norm(axis) - 1.0) > numeric_settings().axis_tol)
    throw std::invalid_argument("expm_su2: rotation axis is not a unit vector");
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  return {{cplx(c, -s * axis.z), cplx(-s * axis.y, -s * axis.x), cplx(s * axis.y, -s * axis.x),
           cplx(c, s * axis.z)}};
}

/// exp(-i g.sigma) for an arbitrary real 3-vector g (no unit-axis check).
inline Mat2 expm_pauli(const Vec3& g) {
  const double a = norm(g);
  if (a == 0.0) return Mat2::identity();
  const double c = std::cos(a);
  const double s = std::sin(a) / a;
  return {{cplx(c, -s * g.z), cplx(-s * g.y, -s * g.x), cplx(s * g.y, -s * g.x), cplx(c, s * g.z)}};
}

namespace detail {
inline void require_unitary(const Mat2& u, const char* where) {
  if (!is_unitary(u, 1e3 * numeric_settings().unitary_tol))
    throw std::invalid_argument(std::string(where) + ": matrix is not unitary");
}
}  // namespace detail

/// |Tr(ideal^dagger actual)| / 2; invariant under global phase.
inline double trace_fidelity(const Mat2& ideal, const Mat2& actual) {
  detail::require_unitary(ideal, "trace_fidelity");
  detail::require_unitary(actual, "trace_fidelity");
  return std::min(1.0, std::abs((ideal.adjoint() * actual).trace()) * 0.5);
}

/// 1 - |Tr(ideal^dagger actual)|/2 evaluated without cancellation: the
/// relative overlap W is reduced to SU(2) form a0 I - i a.sigma and the
/// infidelity is |a|^2 / (1 + |a0|). Accurate for infidelities far below
/// machine epsilon.
inline double trace_infidelity(const Mat2& ideal, const Mat2& actual) {
  detail::require_unitary(ideal, "trace_infidelity");
  detail::require_unitary(actual, "trace_infidelity");
  Mat2 w = ideal.adjoint() * actual;
  const cplx phase = std::sqrt(w.det());
  w *= 1.0 / phase;
  // w = a0 I - i a.sigma with a0, a real up to rounding
  const double a0 = 0.5 * (w.e[0] + w.e[3]).real();
  const Vec3 a{-0.5 * (w.e[1] + w.e[2]).imag(), 0.5 * (w.e[2] - w.e[1]).real(),
               -0.5 * (w.e[0] - w.e[3]).imag()};
  return dot(a, a) / (1.0 + std::abs(a0));
}

/// min over global phase of max-entry distance, via the optimal phase
/// alignment e^{i arg Tr(a^dagger b)}.
inline double phase_aligned_distance(const Mat2& a, const Mat2& b) {
  const cplx overlap = (a.adjoint() * b).trace();
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
  return max_abs_diff(a * phase, b);
}

}  // namespace udog
