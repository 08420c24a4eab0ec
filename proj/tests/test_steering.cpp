/******************************************************************************
 * Copyright 2026 The hscsim Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "hscsim/steering.hpp"

namespace hscsim {
namespace {

TEST(Friction, Values) {
  EXPECT_EQ(eval_friction(0.0, 0.0, 0.7, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(eval_friction(1.0, 2.0, 1.9e-2, 0.0), 3.8e-2);
  EXPECT_DOUBLE_EQ(eval_friction(0.5, -1.0, 6e-2, 0.0), -6e-2);
}

TEST(Friction, RegressorCopiesState) {
  EXPECT_EQ(regression_N(0.0, 0.0), Eigen::RowVector2d(0.0, 0.0));
  EXPECT_EQ(regression_N(1.0, 2.0), Eigen::RowVector2d(1.0, 2.0));
}

TEST(Friction, LinearParametrizationRandom) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-10.0, 10.0);
  std::uniform_real_distribution<double> c(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double th = x(rng), thd = x(rng), B = c(rng), K = c(rng);
    const double direct = eval_friction(th, thd, B, K);
    const double lin = (regression_N(th, thd) * Eigen::Vector2d(K, B)).value();
    EXPECT_LE(std::abs(lin - direct), 1e-14 * std::max(std::abs(direct), 1e-300)) << i;
  }
}

TEST(Reaction, Values) {
  const SteeringParams p;
  EXPECT_EQ(reaction_torque(0.0, p), -0.0);
  EXPECT_NEAR(reaction_torque(1.0, p), -150.0 * std::tanh(0.02), 1e-15);
  EXPECT_NEAR(reaction_torque(1.0, p), -2.9996, 1e-4);
  EXPECT_DOUBLE_EQ(reaction_torque(1e6, p), -150.0);
}

TEST(Reaction, OddSymmetry) {
  const SteeringParams p;
  for (double th : {0.1, 0.7, 3.0, 40.0, 1e3}) {
    EXPECT_EQ(reaction_torque(-th, p), -reaction_torque(th, p));
  }
}

TEST(Accels, ExamplesFromTableValues) {
  const SteeringParams p;
  const SteeringState zero;
  auto a = steering_accels(zero, 0, 0, 0, 0, p);
  EXPECT_EQ(a.theta_ddot_sw, 0.0);
  EXPECT_EQ(a.theta_ddot_c, 0.0);

  a = steering_accels(zero, 0, 0, 1.0, 0, p);
  EXPECT_NEAR(a.theta_ddot_sw, 1.0 / 1.16e-2, 1e-12);
  EXPECT_NEAR(a.theta_ddot_sw, 86.2069, 1e-4);
  EXPECT_EQ(a.theta_ddot_c, 0.0);

  SteeringState s;
  s.theta_dot_sw = 1.0;
  a = steering_accels(s, 0, 0, 0, 0, p);
  EXPECT_NEAR(a.theta_ddot_sw, -1.9e-2 / 1.16e-2, 1e-14);
  EXPECT_NEAR(a.theta_ddot_sw, -1.6379, 1e-4);
}

TEST(Accels, LinearInInputs) {
  const SteeringParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const SteeringState s{u(rng), u(rng), u(rng), u(rng)};
    const double in1[4] = {u(rng), u(rng), u(rng), u(rng)};
    const double in2[4] = {u(rng), u(rng), u(rng), u(rng)};
    const double c = u(rng);
    auto acc = [&](const double* v) { return steering_accels(s, v[0], v[1], v[2], v[3], p); };
    const double zero[4] = {0, 0, 0, 0};
    double comb[4];
    for (int k = 0; k < 4; ++k) comb[k] = in1[k] + c * in2[k];
    const auto a0 = acc(zero), a1 = acc(in1), a2 = acc(in2), ac = acc(comb);
    // Affine in inputs: a(u1 + c u2) - a(0) = (a(u1) - a(0)) + c (a(u2) - a(0)).
    EXPECT_NEAR(ac.theta_ddot_sw - a0.theta_ddot_sw,
                (a1.theta_ddot_sw - a0.theta_ddot_sw) + c * (a2.theta_ddot_sw - a0.theta_ddot_sw),
                1e-10);
    EXPECT_NEAR(ac.theta_ddot_c - a0.theta_ddot_c,
                (a1.theta_ddot_c - a0.theta_ddot_c) + c * (a2.theta_ddot_c - a0.theta_ddot_c), 1e-10);
  }
}

TEST(Accels, RejectsNonFinite) {
  const SteeringParams p;
  const SteeringState s;
  EXPECT_THROW(steering_accels(s, std::nan(""), 0, 0, 0, p), NonFiniteInput);
  SteeringState bad;
  bad.theta_c = std::numeric_limits<double>::infinity();
  EXPECT_THROW(steering_accels(bad, 0, 0, 0, 0, p), NonFiniteInput);
}

TEST(Params, Validation) {
  SteeringParams p;
  EXPECT_NO_THROW(p.validate());
  p.I_sw = 0.0;
  EXPECT_THROW(p.validate(), ParameterError);
  p = SteeringParams{};
  p.B_c = -1.0;
  EXPECT_THROW(p.validate(), ParameterError);
}

}  // namespace
}  // namespace hscsim
