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
#include <cmath>
#include <functional>
#include <numbers>

#include "hscsim/errors.hpp"
#include "hscsim/steering.hpp"

namespace hscsim {

/// Single-track vehicle at constant longitudinal speed.
struct VehicleParams {
  double mass = 1500.0;                      // kg
  double yaw_inertia = 2500.0;               // kg m^2
  double front_axle_distance = 1.2;          // CG to front axle, m
  double rear_axle_distance = 1.6;           // CG to rear axle, m
  double front_cornering_stiffness = 8e4;    // N / rad
  double rear_cornering_stiffness = 8e4;     // N / rad
  double front_peak_force = 8e3;             // N
  double rear_peak_force = 7e3;              // N
  double longitudinal_speed = 15.0;          // m / s
  double steering_ratio = 16.0;              // column angle / road-wheel angle

  double wheelbase() const { return front_axle_distance + rear_axle_distance; }

  /// Understeer gradient (rad per m/s^2) of the linearized model.
  double understeer_gradient() const {
    return mass / wheelbase() *
           (rear_axle_distance / front_cornering_stiffness -
            front_axle_distance / rear_cornering_stiffness);
  }

  void validate() const {
    detail::require_positive("vehicle.mass", mass);
    detail::require_positive("vehicle.yaw_inertia", yaw_inertia);
    detail::require_positive("vehicle.front_axle_distance", front_axle_distance);
    detail::require_positive("vehicle.rear_axle_distance", rear_axle_distance);
    detail::require_positive("vehicle.front_cornering_stiffness", front_cornering_stiffness);
    detail::require_positive("vehicle.rear_cornering_stiffness", rear_cornering_stiffness);
    detail::require_positive("vehicle.front_peak_force", front_peak_force);
    detail::require_positive("vehicle.rear_peak_force", rear_peak_force);
    detail::require_positive("vehicle.longitudinal_speed", longitudinal_speed);
    detail::require_positive("vehicle.steering_ratio", steering_ratio);
  }
};

struct VehicleState {
  double x = 0.0;         // global position, m
  double y = 0.0;
  double psi = 0.0;       // yaw, rad
  double v_y = 0.0;       // body lateral velocity, m/s
  double yaw_rate = 0.0;  // rad/s
};

/// Saturating lateral tire law F = peak tanh(C slip / peak): slope C at the
/// origin, odd, monotone and bounded by peak.
inline double tire_lateral_force(double slip_angle, double cornering_stiffness, double peak) {
  return peak * std::tanh(cornering_stiffness * slip_angle / peak);
}

/// Time derivative of the vehicle state for road-wheel angle delta.
/// Returned in VehicleState layout (x_dot, y_dot, psi_dot, v_y_dot, r_dot).
inline VehicleState bicycle_derivatives(const VehicleState& s, double delta,
                                        const VehicleParams& p) {
  const double vx = p.longitudinal_speed;
  if (!(vx > 0.0)) throw ParameterError("vehicle.longitudinal_speed", "must be > 0");
  const double a = p.front_axle_distance;
  const double b = p.rear_axle_distance;
  const double slip_f = delta - (s.v_y + a * s.yaw_rate) / vx;
  const double slip_r = -(s.v_y - b * s.yaw_rate) / vx;
  const double Ff = tire_lateral_force(slip_f, p.front_cornering_stiffness, p.front_peak_force);
  const double Fr = tire_lateral_force(slip_r, p.rear_cornering_stiffness, p.rear_peak_force);
  const double Ff_lat = Ff * std::cos(delta);

  VehicleState d;
  d.x = vx * std::cos(s.psi) - s.v_y * std::sin(s.psi);
  d.y = vx * std::sin(s.psi) + s.v_y * std::cos(s.psi);
  d.psi = s.yaw_rate;
  d.v_y = (Ff_lat + Fr) / p.mass - vx * s.yaw_rate;
  d.yaw_rate = (a * Ff_lat - b * Fr) / p.yaw_inertia;
  return d;
}

/// Reference steering-wheel angle for an obstacle-clearing double lane
/// change: a full sine period of amplitude `amplitude` starting at
/// `start_time`, a straight `hold`, and the mirrored period to return.
struct LaneChangeSchedule {
  double start_time = 5.0;    // s
  double lobe_period = 2.5;   // s
  double hold = 1.0;          // s
  double amplitude = 1.0;     // rad

  double operator()(double t) const {
    const double w = 2.0 * std::numbers::pi / lobe_period;
    const double t_return = start_time + lobe_period + hold;
    if (t >= start_time && t <= start_time + lobe_period) {
      return amplitude * std::sin(w * (t - start_time));
    }
    if (t >= t_return && t <= t_return + lobe_period) {
      return -amplitude * std::sin(w * (t - t_return));
    }
    return 0.0;
  }
};

/// Synthetic driver: saturated PD tracking of the reference wheel angle.
struct DriverParams {
  double kp = 4.0;          // N m / rad
  double kd = 0.4;          // N m s / rad
  double saturation = 20.0; // N m
  LaneChangeSchedule reference;
  // When set, replaces the PD driver with a scripted torque tau_sw(t).
  // Not expressible in config files; used for open-loop input studies.
  std::function<double(double)> scripted_torque;

  void validate() const {
    detail::require_non_negative("driver.kp", kp);
    detail::require_non_negative("driver.kd", kd);
    detail::require_positive("driver.saturation", saturation);
    detail::require_positive("driver.lobe_period", reference.lobe_period);
    detail::require_non_negative("driver.hold", reference.hold);
    if (!std::isfinite(reference.start_time) || !std::isfinite(reference.amplitude)) {
      throw ParameterError("driver.start_time", "must be finite");
    }
  }
};

inline double driver_torque(double t, const SteeringState& s, const DriverParams& d) {
  if (d.scripted_torque) return d.scripted_torque(t);
  const double raw = d.kp * (d.reference(t) - s.theta_sw) - d.kd * s.theta_dot_sw;
  return std::clamp(raw, -d.saturation, d.saturation);
}

/// Axis-aligned obstacle footprint. Membership is open: boundary points do
/// not collide.
struct Obstacle {
  double x_min = 105.0;
  double x_max = 125.0;
  double y_min = -1.5;
  double y_max = 2.0;

  void validate() const {
    if (!(x_min < x_max)) throw ParameterError("obstacle.x_min", "must be < x_max");
    if (!(y_min < y_max)) throw ParameterError("obstacle.y_min", "must be < y_max");
  }
};

inline bool collision_check(const VehicleState& s, const Obstacle& o) {
  return s.x > o.x_min && s.x < o.x_max && s.y > o.y_min && s.y < o.y_max;
}

}  // namespace hscsim
