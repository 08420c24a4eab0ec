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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "hscsim/adaptive.hpp"
#include "hscsim/errors.hpp"
#include "hscsim/impedance.hpp"
#include "hscsim/ode.hpp"
#include "hscsim/steering.hpp"
#include "hscsim/vehicle.hpp"

namespace hscsim {

enum class Mode { nominal, attack };

inline const char* to_string(Mode m) { return m == Mode::attack ? "attack" : "nominal"; }

inline constexpr std::size_t kStateSize = 23;
using StateVector = Eigen::Matrix<double, static_cast<int>(kStateSize), 1>;

/// Names of the packed state entries, in pack() order. Also the leading
/// CSV columns after `t`.
inline constexpr std::array<std::string_view, kStateSize> kStateNames = {
    "theta_sw",   "theta_dot_sw", "theta_c",    "theta_dot_c", "theta_d",    "theta_dot_d",
    "phi_sw_0",   "phi_sw_1",     "phi_sw_2",   "phi_sw_3",    "phi_c_0",    "phi_c_1",
    "phi_c_2",    "phi_c_3",      "phi_c_4",    "phi_c_5",     "phi_c_6",    "phi_c_7",
    "X",          "Y",            "psi",        "v_y",         "r_yaw"};

/// Steering plant, target, parameter estimates and vehicle: 4 + 2 + 12 + 5.
struct FullState {
  SteeringState steering;
  TargetState target;
  AdaptiveState adaptive;
  VehicleState vehicle;

  StateVector pack() const {
    StateVector v;
    v << steering.theta_sw, steering.theta_dot_sw, steering.theta_c, steering.theta_dot_c,
        target.theta_d, target.theta_dot_d, adaptive.phi_hat_sw, adaptive.phi_hat_c, vehicle.x,
        vehicle.y, vehicle.psi, vehicle.v_y, vehicle.yaw_rate;
    return v;
  }

  static FullState unpack(const StateVector& v) {
    FullState s;
    s.steering = {v(0), v(1), v(2), v(3)};
    s.target = {v(4), v(5)};
    s.adaptive.phi_hat_sw = v.segment<4>(6);
    s.adaptive.phi_hat_c = v.segment<8>(10);
    s.vehicle = {v(18), v(19), v(20), v(21), v(22)};
    return s;
  }
};

/// Full scenario description. Both modes run the same plant and the same
/// adaptive tracking law; they differ only in the target the law tracks.
/// Attack mode uses `attack_target`; nominal mode uses `nominal_target`, a
/// passive constant impedance audited with the mechanical-energy storage
/// (alpha = 0).
struct ScenarioConfig {
  Mode mode = Mode::nominal;
  SteeringParams steering;
  TargetParams attack_target;
  TargetParams nominal_target{1e-2, 0.0, 1.0, 0.15, ImpedanceProfile::constant(0.2, 0.1)};
  ControllerGains gains;
  AdaptiveState initial_estimates;
  bool adapt = true;
  VehicleParams vehicle;
  DriverParams driver;
  Obstacle obstacle;
  SteeringState initial_steering;
  TargetState initial_target;
  VehicleState initial_vehicle;

  double dt = 2.5e-4;
  double duration = 10.0;
  std::size_t log_stride = 4;
  double settle_time = 5.0;            // start of the window for the "after settling" error maxima
  double passivity_tolerance = 1e-9;   // J
  double divergence_limit = 1e9;
  std::size_t validation_samples = 10000;

  const TargetParams& active_target() const {
    return mode == Mode::attack ? attack_target : nominal_target;
  }

  std::size_t step_count() const {
    return static_cast<std::size_t>(std::llround(duration / dt));
  }

  void validate() const {
    detail::require_positive("scenario.dt", dt);
    if (!(duration >= dt) || !std::isfinite(duration)) {
      throw ParameterError("scenario.duration", "must be finite and >= dt");
    }
    if (log_stride == 0) throw ParameterError("scenario.log_stride", "must be >= 1");
    detail::require_non_negative("scenario.passivity_tolerance", passivity_tolerance);
    detail::require_positive("scenario.divergence_limit", divergence_limit);
    if (validation_samples < 2) throw ParameterError("scenario.validation_samples", "must be >= 2");
    steering.validate();
    if (mode == Mode::attack) {
      attack_target.validate();
      if (!(attack_target.alpha > 0.0)) throw ParameterError("target.alpha", "must be > 0");
      const auto [lo, hi] = attack_target.profile.horizon();
      if (lo > 0.0 || hi < duration) {
        throw ParameterError("target.samples", "sampled profile must cover [0, duration]");
      }
    } else {
      nominal_target.validate();
    }
    gains.validate();
    vehicle.validate();
    driver.validate();
    obstacle.validate();
    const FullState init{initial_steering, initial_target, initial_estimates, initial_vehicle};
    if (!init.pack().allFinite()) throw ParameterError("initial", "initial state must be finite");
  }
};

/// Instantaneous signals produced while evaluating the vector field.
struct Instant {
  double tau_sw = 0.0;
  double tau_c = 0.0;
  double theta_ddot_d = 0.0;
  double road_wheel_angle = 0.0;
  PolicyOutput policy;
};

struct Evaluation {
  FullState derivative;
  Instant instant;
};

namespace detail {

inline void divergence_guard(const StateVector& v, double t, double limit) {
  for (std::size_t i = 0; i < kStateSize; ++i) {
    const double x = v(static_cast<Eigen::Index>(i));
    if (!std::isfinite(x) || std::abs(x) >= limit) {
      throw DivergenceError(t, "state " + std::string(kStateNames[i]) + " = " +
                                   std::to_string(x) + " at t = " + std::to_string(t) +
                                   " exceeds divergence guard");
    }
  }
}

}  // namespace detail

/// Vector field of the coupled system with a fixed evaluation order:
/// reaction torque, driver torque, target acceleration, tracking errors,
/// Y_sw, T_sw, Y_c, T_c, plant accelerations, adaptation rates, then the
/// vehicle with road-wheel angle theta_c / steering_ratio.
inline Evaluation step_ordering(const FullState& x, double t, const ScenarioConfig& cfg) {
  detail::divergence_guard(x.pack(), t, cfg.divergence_limit);
  const TargetParams& target = cfg.active_target();

  Evaluation ev;
  Instant& in = ev.instant;
  in.tau_c = reaction_torque(x.steering.theta_c, cfg.steering);
  in.tau_sw = driver_torque(t, x.steering, cfg.driver);
  in.theta_ddot_d = target_accel(x.target, in.tau_sw, in.tau_c, t, target);
  in.policy = evaluate_policy(x.steering, x.target, in.theta_ddot_d, in.tau_sw, in.tau_c,
                              x.adaptive, cfg.gains, cfg.adapt);
  const SteeringAccels acc = steering_accels(x.steering, in.tau_sw, in.tau_c,
                                             in.policy.torques.T_sw, in.policy.torques.T_c,
                                             cfg.steering);
  in.road_wheel_angle = x.steering.theta_c / cfg.vehicle.steering_ratio;

  FullState& d = ev.derivative;
  d.steering = {x.steering.theta_dot_sw, acc.theta_ddot_sw, x.steering.theta_dot_c,
                acc.theta_ddot_c};
  d.target = {x.target.theta_dot_d, in.theta_ddot_d};
  d.adaptive.phi_hat_sw = in.policy.rates.phi_hat_sw_dot;
  d.adaptive.phi_hat_c = in.policy.rates.phi_hat_c_dot;
  d.vehicle = bicycle_derivatives(x.vehicle, in.road_wheel_angle, cfg.vehicle);
  return ev;
}

/// Classical RK4 over step_ordering; throws DivergenceError when the new
/// state trips the guard.
inline FullState rk4_step(const FullState& x, double t, double dt, const ScenarioConfig& cfg) {
  if (!(dt > 0.0)) throw ParameterError("dt", "must be > 0");
  auto field = [&cfg](double tt, const StateVector& v) -> StateVector {
    return step_ordering(FullState::unpack(v), tt, cfg).derivative.pack();
  };
  const StateVector next = rk4_step(field, t, x.pack(), dt);
  detail::divergence_guard(next, t + dt, cfg.divergence_limit);
  return FullState::unpack(next);
}

struct LogSample {
  double t = 0.0;
  FullState state;
  double tau_sw = 0.0;
  double tau_c = 0.0;
  double T_sw = 0.0;
  double T_c = 0.0;
  double theta_ddot_d = 0.0;
  double V_a = 0.0;
  double V_a_dot = 0.0;
  double supplied_power = 0.0;  // theta_d_dot (alpha_T_sw tau_sw + alpha_T_c tau_c)
};

struct TimeSeriesLog {
  double dt = 0.0;
  std::size_t stride = 1;
  std::vector<LogSample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
};

inline LogSample make_log_sample(double t, const FullState& x, const Instant& in,
                                 const TargetParams& target) {
  LogSample s;
  s.t = t;
  s.state = x;
  s.tau_sw = in.tau_sw;
  s.tau_c = in.tau_c;
  s.T_sw = in.policy.torques.T_sw;
  s.T_c = in.policy.torques.T_c;
  s.theta_ddot_d = in.theta_ddot_d;
  s.V_a = storage_value_unchecked(x.target, t, target);
  s.V_a_dot = storage_rate(x.target, in.tau_sw, in.tau_c, t, target);
  s.supplied_power = x.target.theta_dot_d * target_input(in.tau_sw, in.tau_c, target);
  return s;
}

}  // namespace hscsim
