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

#include <gtest/gtest.h>

#include <random>

#include "udog/schemes.hpp"

namespace udog {
namespace {

// e^{i g n.sigma} written out, independent of expm_su2
Mat2 target_oracle(const GateTarget& t) {
  const Vec3 n = t.axis();
  const cplx i(0, 1);
  const double c = std::cos(t.gamma_g), s = std::sin(t.gamma_g);
  return {{c + i * s * n.z, i * s * cplx(n.x, -n.y), i * s * cplx(n.x, n.y), c - i * s * n.z}};
}

TEST(Target, Examples) {
  const Mat2 s = target_unitary({0, 0, -kPi / 4});
  EXPECT_LT(max_abs_diff(s, Mat2{{std::polar(1.0, -kPi / 4), 0.0, 0.0, std::polar(1.0, kPi / 4)}}), 1e-15);
  EXPECT_LT(max_abs_diff(target_unitary({0.4, 1.0, 0.0}), Mat2::identity()), 1e-15);
  EXPECT_LT(max_abs_diff(target_unitary({kPi / 2, 0, kPi / 2}), pauli::X * cplx(0, 1)), 1e-15);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-3, 3), th(0, kPi);
  for (int k = 0; k < 100; ++k) {
    const GateTarget t{th(rng), d(rng), d(rng)};
    EXPECT_LT(max_abs_diff(target_unitary(t), target_oracle(t)), 1e-14);
    EXPECT_NEAR(norm(t.axis()), 1.0, 1e-15);
  }
}

TEST(Level, Validation) {
  EXPECT_NO_THROW(validate(LevelSpec::level3(0.2, -1.0)));
  EXPECT_NO_THROW(validate(LevelSpec::level5({1, 2, 3, 4})));
  EXPECT_THROW(validate(LevelSpec{2, {1, 0}, {0, 0}}), std::invalid_argument);
  EXPECT_THROW(validate(LevelSpec{3, {1, 0, 1}, {0, 0, 1}}), std::invalid_argument);
  EXPECT_THROW(validate(LevelSpec{3, {1, 0}, {0, 0, 1}}), std::invalid_argument);
  EXPECT_THROW(validate(LevelSpec{3, {1, 0, 0}, {0, 2, 1}}), std::invalid_argument);
  EXPECT_THROW(LevelSpec::level5({1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(build_geometric({0, 0, 1}, LevelSpec{4, {1, 0, 0, 0}, {0, 0, 0, 0}}), std::invalid_argument);
  EXPECT_NEAR(LevelSpec::level5({0.3, -1.1, 2.0, 0.7}).alternating_sum(), 1.0, 1e-15);
}

TEST(Build, LevelOneS) {
  const GateTarget s{0, 0, -kPi / 4};
  const auto seq = build_geometric(s, LevelSpec::level1());
  ASSERT_EQ(seq.segments.size(), 2u);
  EXPECT_NEAR(seq.segments[0].phase, kPi / 4, 1e-15);
  EXPECT_NEAR(seq.segments[1].phase, -kPi / 2, 1e-15);
  EXPECT_DOUBLE_EQ(seq.segments[0].area, kPi);
  const Mat2 diag{{1.0, 0.0, 0.0, cplx(0, 1)}};
  EXPECT_LT(phase_aligned_distance(final_propagator(seq), diag), 1e-12);
  EXPECT_EQ(seq.scheme, "ngqc-level1");
}

TEST(Build, LevelThreeS) {
  const double g = -kPi / 4;
  const auto seq = build_geometric({0, 0, g}, LevelSpec::level3(1.5, 1.0));
  ASSERT_EQ(seq.segments.size(), 4u);
  const double expected[] = {1.5 * g + kPi / 2, g + kPi / 2, 0.5 * g + 1.5 * kPi, -kPi / 2};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(seq.segments[static_cast<std::size_t>(k)].phase, expected[k], 1e-15);
  EXPECT_LT(phase_aligned_distance(final_propagator(seq), Mat2{{1.0, 0.0, 0.0, cplx(0, 1)}}), 1e-12);
  EXPECT_EQ(seq.scheme, "udog-level3");
}

TEST(Build, TiltedTargetKeepsOuterRotations) {
  const auto seq = build_geometric({kPi / 2, 0, kPi / 2}, LevelSpec::level1());
  ASSERT_EQ(seq.segments.size(), 3u);
  EXPECT_NEAR(seq.segments[0].area, kPi / 2, 1e-15);
  EXPECT_NEAR(seq.segments[2].area, kPi / 2, 1e-15);
  const auto pole = build_geometric({kPi, 0.3, 0.5}, LevelSpec::level1());
  EXPECT_EQ(pole.segments.size(), 2u);
}

TEST(Build, LevelEquivalence) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(-3, 3), th(0, kPi), p(0, 1);
  for (int k = 0; k < 200; ++k) {
    const GateTarget t{th(rng), d(rng), d(rng)};
    const Mat2 ref = final_propagator(build_geometric(t, LevelSpec::level1()));
    const LevelSpec level = p(rng) < 0.5
                                ? LevelSpec::level3(d(rng), d(rng))
                                : LevelSpec::level5({d(rng), d(rng), d(rng), d(rng)},
                                                    {p(rng) < 0.5, p(rng) < 0.5, p(rng) < 0.5, p(rng) < 0.5, 0});
    EXPECT_LT(phase_aligned_distance(final_propagator(build_geometric(t, level)), ref), 1e-9);
  }
}

TEST(Build, GateCorrectness) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(-3, 3), th(0, kPi);
  for (int k = 0; k < 40; ++k) {
    const GateTarget t{th(rng), d(rng), d(rng)};
    const LevelSpec levels[] = {LevelSpec::level1(), LevelSpec::level3(d(rng), d(rng)),
                                LevelSpec::level5({d(rng), d(rng), d(rng), d(rng)})};
    for (const auto& level : levels)
      for (const auto& shape : {PulseShape::square(), PulseShape::sine_squared()})
        EXPECT_GE(trace_fidelity(target_unitary(t), final_propagator(build_geometric(t, level, shape))),
                  1 - 1e-10);
  }
}

TEST(Build, AreaAudit) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> th(0, kPi);
  for (int k = 0; k < 50; ++k) {
    const GateTarget t{th(rng), 0.2, 0.7};
    for (int n : {1, 3, 5}) {
      const LevelSpec level = n == 1 ? LevelSpec::level1()
                              : n == 3 ? LevelSpec::level3(0.5, 0.25)
                                       : LevelSpec::level5({0.1, 0.2, 0.3, 0.4});
      const auto seq = build_geometric(t, level);
      EXPECT_EQ(seq.segments.size(), static_cast<std::size_t>(n + 2));
      EXPECT_NEAR(seq.total_area(), (n + 1) * kPi, 1e-12);
    }
  }
  EXPECT_NEAR(build_geometric({0, 0, 1}, LevelSpec::level3(0, 0)).total_area(), 4 * kPi, 0.0);
}

TEST(Euler, Baseline) {
  const auto s = build_dynamical_euler(kPi / 2);
  EXPECT_EQ(s.segments.size(), 3u);
  EXPECT_EQ(s.scheme, "dynamical-euler");
  EXPECT_NEAR(trace_fidelity(expm_su2({0, 0, 1}, kPi / 2), final_propagator(s)), 1.0, 1e-12);
  EXPECT_NEAR(trace_fidelity(target_unitary(s.target), final_propagator(s)), 1.0, 1e-12);
  const auto id = build_dynamical_euler(0.0);
  EXPECT_EQ(id.segments.size(), 2u);
  EXPECT_NEAR(trace_fidelity(Mat2::identity(), final_propagator(id)), 1.0, 1e-12);
  for (double a : {-2.0, 0.9, 2 * kPi, -2 * kPi})
    EXPECT_NEAR(trace_fidelity(expm_su2({0, 0, 1}, a), final_propagator(build_dynamical_euler(a))), 1.0, 1e-12);
  EXPECT_THROW(build_dynamical_euler(7.0), std::invalid_argument);
  EXPECT_GE(trace_fidelity(target_unitary(s.target),
                           final_propagator(build_dynamical_euler(kPi / 2, PulseShape::sine_squared()))),
            1 - 1e-10);
}

TEST(NamedGates, Table) {
  EXPECT_EQ(named_gate("S"), (GateTarget{0, 0, -kPi / 4}));
  EXPECT_EQ(named_gate("X"), (GateTarget{kPi / 2, 0, kPi / 2}));
  EXPECT_TRUE(named_gate("T").has_value());
  EXPECT_TRUE(named_gate("H").has_value());
  EXPECT_EQ(named_gate("Z")->gamma_g, -kPi / 2);
  EXPECT_FALSE(named_gate("Q").has_value());
}

}  // namespace
}  // namespace udog
