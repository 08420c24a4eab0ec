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

#include <Eigen/Core>

#include "hscsim/errors.hpp"
#include "hscsim/impedance.hpp"
#include "hscsim/steering.hpp"

namespace hscsim {

using RegressorSw = Eigen::Matrix<double, 1, 4>;
using RegressorC = Eigen::Matrix<double, 1, 8>;
using ParamsSw = Eigen::Matrix<double, 4, 1>;
using ParamsC = Eigen::Matrix<double, 8, 1>;

/// Design gains of the adaptive tracking law. The adaptation gain matrices
/// are diagonal and stored as their diagonals.
struct ControllerGains {
  double mu_sw = 1.01;
  double mu_c = 1.01;
  double k_sw = 1.0;
  double k_c = 1.0;
  ParamsSw gamma_sw = ParamsSw::Constant(80.0);
  ParamsC gamma_c = ParamsC::Constant(80.0);

  void validate() const {
    detail::require_positive("controller.mu_sw", mu_sw);
    detail::require_positive("controller.mu_c", mu_c);
    detail::require_positive("controller.k_sw", k_sw);
    detail::require_positive("controller.k_c", k_c);
    for (int i = 0; i < 4; ++i) detail::require_positive("controller.gamma_sw", gamma_sw(i));
    for (int i = 0; i < 8; ++i) detail::require_positive("controller.gamma_c", gamma_c(i));
  }
};

/// Parameter estimates.
///   phi_sw = [K_sw, B_sw, alpha_sw, I_sw]
///   phi_c  = [r K_sw, r B_sw, r alpha_sw, r, K_c, B_c, alpha_c, I_c], r = I_c / I_sw
struct AdaptiveState {
  ParamsSw phi_hat_sw = ParamsSw::Zero();
  ParamsC phi_hat_c = ParamsC::Zero();
};

inline ParamsSw true_params_sw(const SteeringParams& p) {
  return {p.K_sw, p.B_sw, p.alpha_sw, p.I_sw};
}

inline ParamsC true_params_c(const SteeringParams& p) {
  const double r = p.I_c / p.I_sw;
  ParamsC phi;
  phi << r * p.K_sw, r * p.B_sw, r * p.alpha_sw, r, p.K_c, p.B_c, p.alpha_c, p.I_c;
  return phi;
}

/// Driver experience error e_sw = theta_d - theta_sw, locked tracking error
/// e_c = theta_sw - theta_c, and the filtered errors r = e_dot + mu e.
struct ErrorBundle {
  double e_sw = 0.0;
  double e_c = 0.0;
  double e_dot_sw = 0.0;
  double e_dot_c = 0.0;
  double r_sw = 0.0;
  double r_c = 0.0;
};

inline ErrorBundle tracking_errors(double theta_d, double theta_dot_d, const SteeringState& s,
                                   const ControllerGains& g) {
  ErrorBundle e;
  e.e_sw = theta_d - s.theta_sw;
  e.e_c = s.theta_sw - s.theta_c;
  e.e_dot_sw = theta_dot_d - s.theta_dot_sw;
  e.e_dot_c = s.theta_dot_sw - s.theta_dot_c;
  e.r_sw = e.e_dot_sw + g.mu_sw * e.e_sw;
  e.r_c = e.e_dot_c + g.mu_c * e.e_c;
  return e;
}

inline ErrorBundle tracking_errors(const TargetState& target, const SteeringState& s,
                                   const ControllerGains& g) {
  return tracking_errors(target.theta_d, target.theta_dot_d, s, g);
}

inline RegressorSw regression_sw(const SteeringState& s, double tau_sw, double theta_ddot_d,
                                 const ErrorBundle& e, const ControllerGains& g) {
  RegressorSw Y;
  Y << regression_N(s.theta_sw, s.theta_dot_sw), -tau_sw, theta_ddot_d + g.mu_sw * e.e_dot_sw;
  return Y;
}

/// Column regressor. T_sw must be the wheel attack torque of the same instant.
inline RegressorC regression_c(const SteeringState& s, double tau_sw, double tau_c, double T_sw,
                               const ErrorBundle& e, const ControllerGains& g) {
  RegressorC Y;
  Y << -regression_N(s.theta_sw, s.theta_dot_sw), tau_sw, T_sw,
      regression_N(s.theta_c, s.theta_dot_c), -tau_c, g.mu_c * e.e_dot_c;
  return Y;
}

struct RegressionRows {
  RegressorSw Y_sw;
  RegressorC Y_c;
};

inline RegressionRows regression_rows(const SteeringState& s, double tau_sw, double tau_c,
                                      double T_sw, double theta_ddot_d, const ErrorBundle& e,
                                      const ControllerGains& g) {
  return {regression_sw(s, tau_sw, theta_ddot_d, e, g), regression_c(s, tau_sw, tau_c, T_sw, e, g)};
}

struct AdaptationRates {
  ParamsSw phi_hat_sw_dot = ParamsSw::Zero();
  ParamsC phi_hat_c_dot = ParamsC::Zero();
};

/// phi_hat_dot = Gamma Y^T r for both channels.
inline AdaptationRates adaptation_rates(const RegressorSw& Y_sw, const RegressorC& Y_c,
                                        const ErrorBundle& e, const ControllerGains& g) {
  return {g.gamma_sw.cwiseProduct(Y_sw.transpose()) * e.r_sw,
          g.gamma_c.cwiseProduct(Y_c.transpose()) * e.r_c};
}

inline double attack_torque_sw(const ErrorBundle& e, const RegressorSw& Y_sw,
                               const ParamsSw& phi_hat_sw, const ControllerGains& g) {
  return g.k_sw * e.r_sw + (Y_sw * phi_hat_sw).value();
}

inline double attack_torque_c(const ErrorBundle& e, const RegressorC& Y_c,
                              const ParamsC& phi_hat_c, const ControllerGains& g) {
  return g.k_c * e.r_c + (Y_c * phi_hat_c).value();
}

struct AttackTorques {
  double T_sw = 0.0;
  double T_c = 0.0;
};

/// Evaluates T_sw = k_sw r_sw + Y_sw phi_hat_sw and T_c = k_c r_c + Y_c phi_hat_c
/// for already assembled rows. Y_c must carry the T_sw this returns; use
/// evaluate_policy to get the ordering right automatically.
inline AttackTorques attack_torques(const ErrorBundle& e, const RegressorSw& Y_sw,
                                    const RegressorC& Y_c, const AdaptiveState& a,
                                    const ControllerGains& g) {
  return {attack_torque_sw(e, Y_sw, a.phi_hat_sw, g), attack_torque_c(e, Y_c, a.phi_hat_c, g)};
}

/// Everything the policy produces at one instant.
struct PolicyOutput {
  ErrorBundle errors;
  RegressorSw Y_sw;
  RegressorC Y_c;
  AttackTorques torques;
  AdaptationRates rates;
};

/// Ordered evaluation: errors, Y_sw, T_sw, Y_c (containing T_sw), T_c, then
/// the adaptation rates. With adapt == false the rates are zero and the
/// estimates stay frozen.
inline PolicyOutput evaluate_policy(const SteeringState& s, const TargetState& target,
                                    double theta_ddot_d, double tau_sw, double tau_c,
                                    const AdaptiveState& a, const ControllerGains& g,
                                    bool adapt = true) {
  PolicyOutput out;
  out.errors = tracking_errors(target, s, g);
  out.Y_sw = regression_sw(s, tau_sw, theta_ddot_d, out.errors, g);
  out.torques.T_sw = attack_torque_sw(out.errors, out.Y_sw, a.phi_hat_sw, g);
  out.Y_c = regression_c(s, tau_sw, tau_c, out.torques.T_sw, out.errors, g);
  out.torques.T_c = attack_torque_c(out.errors, out.Y_c, a.phi_hat_c, g);
  if (adapt) out.rates = adaptation_rates(out.Y_sw, out.Y_c, out.errors, g);
  return out;
}

}  // namespace hscsim
