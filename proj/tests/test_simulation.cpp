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
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "hscsim/io.hpp"
#include "hscsim/ode.hpp"
#include "hscsim/scenario.hpp"
#include "hscsim/simulation.hpp"

namespace hscsim {
namespace {

TEST(Rk4, ZeroField) {
  const Eigen::Vector3d x(1, -2, 3);
  const Eigen::Vector3d y =
      rk4_step([](double, const Eigen::Vector3d&) { return Eigen::Vector3d::Zero().eval(); }, 0.0, x, 0.1);
  EXPECT_EQ(x, y);
}

TEST(Rk4, ScalarDecayOneStep) {
  const double y = rk4_step([](double, double x) { return -x; }, 0.0, 1.0, 0.1);
  EXPECT_LT(std::abs(y - std::exp(-0.1)), 1e-7);
}

double damped_oscillator_error(double dt) {
  Eigen::Matrix2d A;
  A << 0, 1, -4, -0.4;
  auto f = [&A](double, const Eigen::Vector2d& x) { return (A * x).eval(); };
  Eigen::Vector2d x(1, 0);
  const int n = static_cast<int>(std::llround(2.0 / dt));
  for (int i = 0; i < n; ++i) x = rk4_step(f, i * dt, x, dt);
  // Exact solution of x'' + 0.4 x' + 4 x = 0, x(0) = 1, x'(0) = 0.
  const double z = 0.2, wd = std::sqrt(4.0 - z * z), t = 2.0;
  const double exact = std::exp(-z * t) * (std::cos(wd * t) + z / wd * std::sin(wd * t));
  return std::abs(x(0) - exact);
}

TEST(Rk4, FourthOrderConvergence) {
  const double e1 = damped_oscillator_error(1e-2);
  const double e2 = damped_oscillator_error(5e-3);
  const double e3 = damped_oscillator_error(2.5e-3);
  EXPECT_GE(std::log2(e1 / e2), 3.8);
  EXPECT_GE(std::log2(e2 / e3), 3.8);
}

TEST(StateVector, PackRoundTrip) {
  StateVector v;
  for (int i = 0; i < static_cast<int>(kStateSize); ++i) v(i) = 0.5 * i - 3.0;
  EXPECT_EQ(FullState::unpack(v).pack(), v);
  EXPECT_EQ(kStateNames.front(), "theta_sw");
  EXPECT_EQ(kStateNames.back(), "r_yaw");
}

TEST(Engine, EquilibriumAtRest) {
  ScenarioConfig cfg;
  const FullState x{};
  const Evaluation ev = step_ordering(x, 1.0, cfg);  // before the maneuver starts
  StateVector d = ev.derivative.pack();
  EXPECT_EQ(d(18), cfg.vehicle.longitudinal_speed);  // constant forward speed
  d(18) = 0.0;
  EXPECT_TRUE(d.isZero(0)) << d.transpose();
  cfg.mode = Mode::attack;
  d = step_ordering(x, 1.0, cfg).derivative.pack();
  d(18) = 0.0;
  EXPECT_TRUE(d.isZero(0));
}

FullState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  StateVector v;
  for (int i = 0; i < static_cast<int>(kStateSize); ++i) v(i) = u(rng);
  return FullState::unpack(v);
}

TEST(Engine, PureAndConsistent) {
  std::mt19937_64 rng(77);
  for (Mode m : {Mode::nominal, Mode::attack}) {
    ScenarioConfig cfg;
    cfg.mode = m;
    for (int i = 0; i < 100; ++i) {
      const FullState x = random_state(rng);
      const double t = 10.0 * std::uniform_real_distribution<double>(0, 1)(rng);
      const Evaluation a = step_ordering(x, t, cfg);
      const Evaluation b = step_ordering(x, t, cfg);
      EXPECT_EQ(a.derivative.pack(), b.derivative.pack());
      EXPECT_EQ(a.instant.policy.Y_c(3), a.instant.policy.torques.T_sw);
      EXPECT_EQ(a.instant.road_wheel_angle, x.steering.theta_c / cfg.vehicle.steering_ratio);
    }
  }
}

TEST(Engine, DivergenceGuard) {
  ScenarioConfig cfg;
  FullState x;
  x.steering.theta_dot_c = 2e9;
  EXPECT_THROW(step_ordering(x, 0, cfg), DivergenceError);
  x.steering.theta_dot_c = std::nan("");
  EXPECT_THROW(step_ordering(x, 0, cfg), DivergenceError);
}

TEST(Engine, Rk4RejectsBadStep) {
  const ScenarioConfig cfg;
  EXPECT_THROW(rk4_step(FullState{}, 0.0, 0.0, cfg), ParameterError);
}

TEST(Scenario, NominalDefault) {
  const RunResult r = run_scenario(ScenarioConfig{});
  EXPECT_FALSE(r.summary.diverged);
  EXPECT_FALSE(r.summary.collision);
  EXPECT_LT(r.summary.max_abs_e_sw_after_settle, 1e-2);
  EXPECT_EQ(r.log.size(), 10001u);
  EXPECT_DOUBLE_EQ(r.summary.final_time, 10.0);
  EXPECT_EQ(r.summary.energy_verdict, EnergyVerdict::passive);
}

TEST(Scenario, AttackDefault) {
  ScenarioConfig cfg;
  cfg.mode = Mode::attack;
  const RunResult r = run_scenario(cfg);
  EXPECT_TRUE(r.summary.profile_accepted);
  EXPECT_TRUE(r.summary.collision);
  ASSERT_TRUE(r.summary.collision_time.has_value());
  EXPECT_LT(*r.summary.collision_time, cfg.duration);
  EXPECT_EQ(r.summary.energy_verdict, EnergyVerdict::non_passive);
}

TEST(Scenario, RejectsBadTiming) {
  ScenarioConfig cfg;
  cfg.duration = 0.0;
  EXPECT_THROW(run_scenario(cfg), ParameterError);
  cfg = ScenarioConfig{};
  cfg.dt = -1e-3;
  EXPECT_THROW(run_scenario(cfg), ParameterError);
  cfg = ScenarioConfig{};
  cfg.log_stride = 0;
  EXPECT_THROW(run_scenario(cfg), ParameterError);
}

TEST(Scenario, RejectedProfileStillRuns) {
  ScenarioConfig cfg;
  cfg.mode = Mode::attack;
  cfg.duration = 1.0;
  cfg.attack_target.profile = ImpedanceProfile::exponential(2.8e-2, 6e-3, 1.05);
  const RunResult r = run_scenario(cfg);
  EXPECT_FALSE(r.summary.profile_accepted);
  EXPECT_NE(r.summary.profile_warning.find("damping_bound"), std::string::npos);
  EXPECT_EQ(r.log.size(), 1001u);
}

TEST(Scenario, DivergenceKeepsPartialLog) {
  // Coarse steps cannot resolve the attack's stiffening target.
  ScenarioConfig cfg;
  cfg.mode = Mode::attack;
  cfg.dt = 1e-3;
  cfg.log_stride = 1;
  const RunResult r = run_scenario(cfg);
  ASSERT_TRUE(r.summary.diverged);
  ASSERT_TRUE(r.summary.divergence_time.has_value());
  EXPECT_GT(*r.summary.divergence_time, 1.0);
  EXPECT_LT(*r.summary.divergence_time, cfg.duration);
  EXPECT_FALSE(r.log.empty());
  EXPECT_LE(r.log.samples.back().t, *r.summary.divergence_time);
  EXPECT_NE(r.summary.divergence_message.find("divergence"), std::string::npos);
}

TEST(Scenario, Deterministic) {
  for (Mode m : {Mode::nominal, Mode::attack}) {
    ScenarioConfig cfg;
    cfg.mode = m;
    std::ostringstream a, b;
    write_timeseries_csv(a, run_scenario(cfg).log);
    write_timeseries_csv(b, run_scenario(cfg).log);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(Scenario, RefinementStability) {
  ScenarioConfig cfg;
  const RunResult coarse = run_scenario(cfg);
  cfg.dt /= 2;
  cfg.log_stride *= 2;
  const RunResult fine = run_scenario(cfg);
  const SteeringState& a = coarse.log.samples.back().state.steering;
  const SteeringState& b = fine.log.samples.back().state.steering;
  EXPECT_LT(std::abs(a.theta_sw - b.theta_sw), 1e-6);
  EXPECT_LT(std::abs(a.theta_c - b.theta_c), 1e-6);
  EXPECT_LT(std::abs(a.theta_dot_sw - b.theta_dot_sw), 1e-6);
  EXPECT_LT(std::abs(a.theta_dot_c - b.theta_dot_c), 1e-6);
}

// Along the attack log, V_a_dot - (theta_dot_d + alpha theta_d) u equals the
// two positive quadratic terms.
TEST(Scenario, PointwiseStorageExcess) {
  ScenarioConfig cfg;
  cfg.mode = Mode::attack;
  const RunResult r = run_scenario(cfg);
  const TargetParams& p = cfg.attack_target;
  std::size_t checked = 0;
  for (const LogSample& s : r.log.samples) {
    const TargetState& x = s.state.target;
    if (x.theta_d == 0.0 && x.theta_dot_d == 0.0) continue;
    const double u = target_input(s.tau_sw, s.tau_c, p);
    const StorageRateTerms q = storage_rate_terms(x, s.tau_sw, s.tau_c, s.t, p);
    const double excess = s.V_a_dot - (x.theta_dot_d + p.alpha * x.theta_d) * u;
    ASSERT_GT(excess, 0.0) << s.t;
    ASSERT_NEAR(excess, q.velocity_quadratic + q.position_quadratic, 1e-6) << s.t;
    EXPECT_NEAR(s.supplied_power, x.theta_dot_d * u, 1e-12 * (1 + std::abs(s.supplied_power)));
    ++checked;
  }
  EXPECT_GT(checked, r.log.size() / 3);
}

// Adaptive tracking in nominal mode from a rough plant model under bounded
// smooth driver torques.
TEST(Scenario, NominalTrackingConverges) {
  std::mt19937_64 rng(20260);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 8; ++trial) {
    ScenarioConfig cfg;
    const double A = 0.1 + 1.9 * u(rng), w1 = 0.5 + 2.5 * u(rng), w2 = 0.5 + 2.5 * u(rng);
    const double ph = 6.28 * u(rng);
    cfg.driver.scripted_torque = [=](double t) {
      return A * (std::sin(w1 * t + ph) + 0.5 * std::sin(w2 * t)) * (1.0 - std::exp(-4.0 * t));
    };
    cfg.initial_estimates.phi_hat_sw = true_params_sw(cfg.steering);
    cfg.initial_estimates.phi_hat_c = true_params_c(cfg.steering);
    for (int i = 0; i < 4; ++i) cfg.initial_estimates.phi_hat_sw(i) *= 0.5 + u(rng);
    for (int i = 0; i < 8; ++i) cfg.initial_estimates.phi_hat_c(i) *= 0.5 + u(rng);
    const RunResult r = run_scenario(cfg);
    ASSERT_FALSE(r.summary.diverged);
    EXPECT_LT(r.summary.max_abs_e_sw_after_settle, 1e-2) << "trial " << trial;
    EXPECT_LT(r.summary.max_abs_e_c_after_settle, 1e-2) << "trial " << trial;
  }
}

TEST(Scenario, PerfectKnowledgeKeepsErrorsAtZero) {
  ScenarioConfig cfg;
  cfg.initial_estimates.phi_hat_sw = true_params_sw(cfg.steering);
  cfg.initial_estimates.phi_hat_c = true_params_c(cfg.steering);
  cfg.adapt = false;
  const RunResult r = run_scenario(cfg);
  EXPECT_LT(r.summary.max_abs_e_sw, 1e-9);
  EXPECT_LT(r.summary.max_abs_e_c, 1e-9);
}

}  // namespace
}  // namespace hscsim
