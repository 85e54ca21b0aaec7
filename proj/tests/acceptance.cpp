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


// Acceptance harness: one PASS/FAIL line per criterion. Exit status is
// nonzero when any criterion fails.

#include <array>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "udog/udog.hpp"

namespace {

using namespace udog;

const double kRt2 = std::sqrt(2.0);
const GateTarget kS{0, 0, -kPi / 4};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool near_rel(double v, double ref, double rel) { return std::abs(v - ref) <= rel * std::abs(ref); }

bool phase_equivalent(const LevelSpec& a, const LevelSpec& b, double gamma) {
  for (int k = 0; k < a.n; ++k) {
    const double diff = (a.xi[k] - b.xi[k]) * gamma + (a.parity[k] - b.parity[k]) * kPi;
    if (std::abs(std::remainder(diff, kPi)) > 1e-8) return false;
  }
  return true;
}

// Independent oracle for square sequences: each segment rotates the error
// generator about a fixed axis, so its contribution integrates in closed form.
using Rot = std::array<std::array<double, 3>, 3>;

Rot so3(const Mat2& u) {
  const Mat2 s[3] = {pauli::X, pauli::Y, pauli::Z};
  Rot r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = 0.5 * (s[i] * u * s[j] * u.adjoint()).trace().real();
  return r;
}

Vec3 analytic_endpoint(const PulseSequence& seq, Channel ch) {
  Mat2 start = Mat2::identity();
  Vec3 acc;
  for (const auto& seg : seq.segments) {
    const Vec3 n{std::cos(seg.phase), std::sin(seg.phase), 0.0};
    const Vec3 v = ch == Channel::detuning ? Vec3{0, 0, 0.5} : n * 0.5;
    const double T = seg.duration;
    const Vec3 par = n * dot(n, v);
    const Vec3 seg_int = par * T + (v - par) * std::sin(T) - cross(n, v) * (1.0 - std::cos(T));
    const Rot r = so3(start);
    acc += Vec3{r[0][0] * seg_int.x + r[1][0] * seg_int.y + r[2][0] * seg_int.z,
                r[0][1] * seg_int.x + r[1][1] * seg_int.y + r[2][1] * seg_int.z,
                r[0][2] * seg_int.x + r[1][2] * seg_int.y + r[2][2] * seg_int.z};
    start = expm_su2(n, seg.area) * start;
  }
  return acc;
}

const std::vector<double>& fit_grid() {
  static const std::vector<double> g = log_grid(1e-4, 3e-3, 25);
  return g;
}

// ---- criteria ----

void closure_solution(Outcome& o) {
  for (double g : {-kPi / 4, -kPi / 8, -kPi / 2, 0.3}) {
    const XiSolution sol = solve_xi({0, 0, g}, 3);
    bool has_branch = false;
    for (const auto& c : sol.candidates)
      has_branch = has_branch || (std::abs(c.xi[0] - 1.5) < 1e-6 && std::abs(c.xi[1] - 1.0) < 1e-6);
    o.detail << " g=" << num(g) << ":xi=(" << num(sol.xi.at(0)) << "," << num(sol.xi.at(1))
             << ") res=" << num(sol.residual_norm);
    o.require(sol.converged && sol.residual_norm < 1e-10, "residual at g=" + num(g));
    o.require(has_branch, "(1.5,1) branch missing at g=" + num(g));
    o.require(phase_equivalent(sol.level_spec(), LevelSpec::level3(1.5, 1.0), g),
              "returned xi not phase-equivalent to (1.5,1) at g=" + num(g));
  }
}

void udog_closure(Outcome& o) {
  const auto l1 = build_geometric(kS, LevelSpec::level1());
  const auto l3 = build_geometric(kS, LevelSpec::level3(1.5, 1.0));
  const double d1_det = error_curve_direct(l1, Channel::detuning).distance();
  const double d1_rabi = error_curve_direct(l1, Channel::rabi).distance();
  const double d3_det = error_curve_direct(l3, Channel::detuning).distance();
  const double d3_rabi = error_curve_direct(l3, Channel::rabi).distance();
  o.detail << " level1 det=" << num(d1_det) << " rabi=" << num(d1_rabi) << "; level3 det=" << num(d3_det)
           << " rabi=" << num(d3_rabi);
  o.require(std::abs(d1_det - 3.6955) <= 0.01, "level-1 detuning distance");
  o.require(std::abs(d1_rabi - 2.4044) <= 0.01, "level-1 rabi distance");
  o.require(d3_det < 1e-7 && d3_rabi < 1e-7, "level-3 distances");
  // oracle: segment-wise analytic quadrature and the closed forms
  o.require(std::abs(2 * norm(analytic_endpoint(l1, Channel::detuning)) - d1_det) < 1e-9, "analytic oracle (det)");
  o.require(std::abs(2 * norm(analytic_endpoint(l1, Channel::rabi)) - d1_rabi) < 1e-9, "analytic oracle (rabi)");
  o.require(2 * norm(analytic_endpoint(l3, Channel::detuning)) < 1e-7, "analytic oracle level-3");
  o.require(std::abs(d1_det - 2 * std::sqrt(2 + kRt2)) < 1e-9, "closed form 2 sqrt(2+sqrt2)");
  o.require(std::abs(d1_rabi - kPi * std::sqrt(2 - kRt2)) < 1e-9, "closed form pi sqrt(2-sqrt2)");
}

void table_row(Outcome& o, const PulseSequence& seq, double slope, double slope_tol, double c_det, double c_rabi,
               double rel) {
  for (Channel ch : {Channel::detuning, Channel::rabi}) {
    const SweepFit f = sweep_and_fit(seq, ch, fit_grid());
    const double ref = ch == Channel::detuning ? c_det : c_rabi;
    o.detail << " " << to_string(ch) << ": slope=" << num(f.slope) << " coef=" << num(f.coefficient)
             << " (ref " << num(ref) << ")";
    o.require(std::abs(f.slope - slope) <= slope_tol, to_string(ch) + " slope");
    o.require(near_rel(f.coefficient, ref, rel), to_string(ch) + " coefficient");
  }
}

void traditional_row(Outcome& o) {
  table_row(o, build_geometric(kS, LevelSpec::level1()), 2.0, 0.05, 1 + 1 / kRt2, (2 - kRt2) * kPi * kPi / 8, 0.02);
}

void level3_row(Outcome& o) {
  table_row(o, build_geometric(kS, LevelSpec::level3(1.5, 1.0)), 4.0, 0.05, 1 - 1 / kRt2,
            (2 - kRt2) * std::pow(kPi, 4) / 32, 0.05);
}

void level5_row(Outcome& o) {
  const XiSolution sol = solve_xi(kS, 5);
  o.detail << " xi=(";
  for (std::size_t k = 0; k < sol.xi.size(); ++k) o.detail << (k ? "," : "") << num(sol.xi[k]);
  o.detail << ") res=" << num(sol.residual_norm) << (sol.converged ? "" : " NOT CONVERGED");
  const auto seq = build_geometric(kS, sol.level_spec());
  if (!sol.converged) {
    // fallback demonstration; the criterion itself still fails
    for (Channel ch : {Channel::detuning, Channel::rabi}) {
      const SweepFit f = sweep_and_fit(seq, ch, fit_grid());
      o.detail << " " << to_string(ch) << " slope=" << num(f.slope) << (f.slope >= 4.0 ? " (>=4)" : " (<4)");
    }
    o.require(false, "no exact level-5 solution under the reconstructed ansatz");
    return;
  }
  table_row(o, seq, 6.0, 0.1, 1 + 1 / kRt2, (2 - kRt2) * std::pow(kPi, 6) / 128, 0.05);
}

void correspondence(Outcome& o) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> gd(-kPi, kPi);
  const std::vector<GateTarget> gates{kS, *named_gate("Z"), {0, 0, gd(rng)}, {0, 0, gd(rng)}};
  double worst = 0.0, worst_trace = 0.0;
  for (const auto& g : gates)
    for (const auto& level : {LevelSpec::level1(), LevelSpec::level3(1.5, 1.0)})
      for (Channel ch : {Channel::rabi, Channel::detuning}) {
        const auto rep = verify_correspondence(build_geometric(g, level), ch);
        worst = std::max(worst, rep.max_deviation);
        worst_trace = std::max(worst_trace, rep.max_trace_gap);
      }
  o.detail << " max deviation=" << num(worst) << " max |D11+D22|=" << num(worst_trace);
  o.require(worst < 1e-8, "D-matrix vs error curve");
  o.require(worst_trace < 1e-10, "D22 = -D11");
}

void property_suite(Outcome& o) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-3, 3), th(0, kPi);
  double unit = 0.0, transport = 0.0, equiv = 0.0, shape = 0.0, f0 = 0.0;
  for (int k = 0; k < 40; ++k) {
    const GateTarget t{th(rng), d(rng), d(rng)};
    const LevelSpec level = LevelSpec::level3(d(rng), d(rng));
    const auto seq = build_geometric(t, level);
    for (const auto& p : propagate(seq, 1.02, -0.03, {2, 4}))
      unit = std::max(unit, max_abs(p.u * p.u.adjoint() - Mat2::identity()));
    const auto path = bloch_path(propagate(seq, 1.0, 0.0, {2, 6}), t.dressed_frame());
    for (const auto& s : path.samples) {
      if (s.kind != SampleKind::node) continue;
      const Mat2 h = sigma_dot(control_vector(seq, s.segment, s.tau));
      for (const auto& psi : dressed_states(s)) {
        const cplx e = std::conj(psi[0]) * (h(0, 0) * psi[0] + h(0, 1) * psi[1]) +
                       std::conj(psi[1]) * (h(1, 0) * psi[0] + h(1, 1) * psi[1]);
        transport = std::max(transport, std::abs(e));
      }
    }
    const Mat2 ref = final_propagator(build_geometric(t, LevelSpec::level1()));
    equiv = std::max(equiv, phase_aligned_distance(final_propagator(seq), ref));
    shape = std::max(shape, phase_aligned_distance(final_propagator(seq),
                                                   final_propagator(build_geometric(t, level, PulseShape::sine_squared()))));
    for (Channel ch : {Channel::rabi, Channel::detuning}) {
      const double r2 = std::pow(norm(error_curve_direct(seq, ch).endpoint()), 2);
      f0 = std::max(f0, std::abs(filter_function(seq, ch, {0.0}).value[0] - r2));
    }
  }
  // first-order cancellation: infidelity / beta -> 0 on closed curves
  const auto closed = build_geometric(kS, LevelSpec::level3(1.5, 1.0));
  const auto open = build_geometric(kS, LevelSpec::level1());
  bool cancels = true;
  double ratio_small = 0.0;
  for (Channel ch : {Channel::rabi, Channel::detuning}) {
    const double r1 = channel_infidelity(closed, ch, 1e-2) / 1e-2;
    const double r2 = channel_infidelity(closed, ch, 1e-3) / 1e-3;
    const double r3 = channel_infidelity(closed, ch, 1e-4) / 1e-4;
    const double ro = channel_infidelity(open, ch, 1e-4) / 1e-4;
    cancels = cancels && r3 < r2 && r2 < r1 && r3 < 1e-10 && ro > 1e-5;
    ratio_small = std::max(ratio_small, r3);
  }
  o.detail << " unitarity=" << num(unit) << " transport=" << num(transport) << " equivalence=" << num(equiv)
           << " shape=" << num(shape) << " F(0)-|r|^2=" << num(f0) << " I/beta@1e-4=" << num(ratio_small);
  o.require(unit < 1e-12, "unitarity");
  o.require(transport < 1e-9, "parallel transport");
  o.require(equiv < 1e-9, "level equivalence");
  o.require(shape < 1e-8, "shape independence");
  o.require(f0 < 1e-10, "F(0) = |r(T)|^2");
  o.require(cancels, "first-order cancellation");
}

void x_gate(Outcome& o) {
  const GateTarget x = *named_gate("X");
  const double exact = closure_conditions_level3(x, -5.0 / 3.0, 5.0 / 3.0).norm();
  const double printed = residuals_level3(x, -5.0 / 3.0, 5.0 / 3.0).norm();
  o.detail << " triple=(pi/2,0,pi/2) residual_norm exact=" << num(exact) << " closed-form=" << num(printed);
  o.require(exact < 1e-10 && printed < 1e-10, "X-gate level-3 closure at (-5/3,5/3)");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"1 closure solution (1.5,1) for z rotations", closure_solution},
      {"2 level-3 S closure, level-1 distances", udog_closure},
      {"3 traditional row: slope 2, coefficients", traditional_row},
      {"4 level-3 row: slope 4, coefficients", level3_row},
      {"5 level-5 row: slope 6, coefficients", level5_row},
      {"6 D-matrix / error-curve correspondence", correspondence},
      {"7 property suite", property_suite},
      {"8 X gate at xi=(-5/3,5/3)", x_gate},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %s:%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
