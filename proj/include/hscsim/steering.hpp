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

#include <cmath>

#include <Eigen/Core>

#include "hscsim/errors.hpp"

namespace hscsim {

/// Physical constants of the two-inertia steering plant (driver input device
/// plus steering column) and of the tire/road reaction torque. SI units.
/// Defaults are the reference simulation values.
struct SteeringParams {
  double I_sw = 1.16e-2;   // kg m^2
  double I_c = 2.35e-2;    // kg m^2
  double B_sw = 1.9e-2;    // kg m^2 / s
  double B_c = 6e-2;       // kg m^2 / s
  double K_sw = 0.0;       // N m / rad
  double K_c = 0.0;        // N m / rad
  double alpha_sw = 1.0;
  double alpha_c = 1.0;
  double gamma = 0.02;     // 1 / rad
  double C_d = 150.0;      // N m

  /// Throws ParameterError naming the first field that breaks an invariant.
  void validate() const {
    detail::require_positive("steering.I_sw", I_sw);
    detail::require_positive("steering.I_c", I_c);
    detail::require_non_negative("steering.B_sw", B_sw);
    detail::require_non_negative("steering.B_c", B_c);
    detail::require_non_negative("steering.K_sw", K_sw);
    detail::require_non_negative("steering.K_c", K_c);
    detail::require_positive("steering.alpha_sw", alpha_sw);
    detail::require_positive("steering.alpha_c", alpha_c);
    detail::require_positive("steering.gamma", gamma);
    detail::require_positive("steering.C_d", C_d);
  }
};

struct SteeringState {
  double theta_sw = 0.0;
  double theta_dot_sw = 0.0;
  double theta_c = 0.0;
  double theta_dot_c = 0.0;

  bool finite() const {
    return std::isfinite(theta_sw) && std::isfinite(theta_dot_sw) && std::isfinite(theta_c) &&
           std::isfinite(theta_dot_c);
  }
};

struct SteeringAccels {
  double theta_ddot_sw = 0.0;
  double theta_ddot_c = 0.0;
};

/// Linear damping/stiffness term N(theta, theta_dot) = B theta_dot + K theta.
inline double eval_friction(double theta, double theta_dot, double B, double K) {
  return B * theta_dot + K * theta;
}

/// Regressor row [theta, theta_dot]; multiplied by [K, B]^T it reproduces
/// eval_friction.
inline Eigen::RowVector2d regression_N(double theta, double theta_dot) {
  return {theta, theta_dot};
}

/// Tire/road self-aligning torque acting on the steering column.
inline double reaction_torque(double theta_c, const SteeringParams& params) {
  return -params.C_d * std::tanh(params.gamma * theta_c);
}

/// Angular accelerations of the wheel and column given driver torque tau_sw,
/// reaction torque tau_c and the servo (attack) torques T_sw, T_c.
inline SteeringAccels steering_accels(const SteeringState& s, double tau_sw, double tau_c,
                                      double T_sw, double T_c, const SteeringParams& p) {
  detail::require_finite("steering_accels", {s.theta_sw, s.theta_dot_sw, s.theta_c,
                                             s.theta_dot_c, tau_sw, tau_c, T_sw, T_c});
  const double N_sw = eval_friction(s.theta_sw, s.theta_dot_sw, p.B_sw, p.K_sw);
  const double N_c = eval_friction(s.theta_c, s.theta_dot_c, p.B_c, p.K_c);
  return {(p.alpha_sw * tau_sw + T_sw - N_sw) / p.I_sw,
          (p.alpha_c * tau_c + T_c - N_c) / p.I_c};
}

}  // namespace hscsim
