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
#include <cstddef>
#include <optional>
#include <string>

#include "hscsim/energy_audit.hpp"
#include "hscsim/impedance.hpp"
#include "hscsim/simulation.hpp"

namespace hscsim {

struct Summary {
  Mode mode = Mode::nominal;
  bool collision = false;
  std::optional<double> collision_time;
  bool diverged = false;
  std::optional<double> divergence_time;
  std::string divergence_message;
  double final_time = 0.0;
  std::size_t steps = 0;

  double max_abs_e_sw = 0.0;
  double max_abs_e_c = 0.0;
  double max_abs_e_sw_after_settle = 0.0;
  double max_abs_e_c_after_settle = 0.0;
  double max_abs_theta_dot_sw = 0.0;
  double peak_abs_theta_sw = 0.0;
  double peak_abs_tau_sw = 0.0;
  double peak_abs_tau_c = 0.0;

  AdaptiveState final_estimates;

  // Attack mode only: whether the impedance profile passed validation over
  // the run duration. The run proceeds either way.
  bool profile_accepted = true;
  std::string profile_warning;

  EnergyVerdict energy_verdict = EnergyVerdict::passive;
  double energy_margin_sup = 0.0;
  double energy_margin_final_quarter_gain = 0.0;
};

struct RunResult {
  TimeSeriesLog log;
  Summary summary;
};

/// Integrates the scenario from its initial state with fixed-step RK4.
/// Collision and error statistics are taken at every integration step; the
/// log keeps every `log_stride`-th step. Divergence ends the run early and
/// is reported in the summary with the partial log.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const TargetParams& target = cfg.active_target();

  RunResult out;
  Summary& sum = out.summary;
  sum.mode = cfg.mode;
  if (cfg.mode == Mode::attack) {
    const ValidationReport rep = validate_profile(target, cfg.duration, cfg.validation_samples);
    sum.profile_accepted = rep.accepted;
    if (!rep.accepted) {
      sum.profile_warning = std::string("impedance profile rejected: ") +
                            to_string(rep.violated_condition) + " at t = " +
                            std::to_string(rep.first_violation_time.value_or(0.0));
    }
  }

  out.log.dt = cfg.dt;
  out.log.stride = cfg.log_stride;
  const std::size_t n_steps = cfg.step_count();
  out.log.samples.reserve(n_steps / cfg.log_stride + 1);

  FullState x{cfg.initial_steering, cfg.initial_target, cfg.initial_estimates,
              cfg.initial_vehicle};
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;
    Evaluation ev;
    try {
      ev = step_ordering(x, t, cfg);
    } catch (const DivergenceError& e) {
      sum.diverged = true;
      sum.divergence_time = e.time();
      sum.divergence_message = e.what();
      break;
    }
    const ErrorBundle& err = ev.instant.policy.errors;
    sum.final_time = t;
    sum.steps = i;
    sum.final_estimates = x.adaptive;
    sum.max_abs_e_sw = std::max(sum.max_abs_e_sw, std::abs(err.e_sw));
    sum.max_abs_e_c = std::max(sum.max_abs_e_c, std::abs(err.e_c));
    if (t >= cfg.settle_time) {
      sum.max_abs_e_sw_after_settle = std::max(sum.max_abs_e_sw_after_settle, std::abs(err.e_sw));
      sum.max_abs_e_c_after_settle = std::max(sum.max_abs_e_c_after_settle, std::abs(err.e_c));
    }
    sum.max_abs_theta_dot_sw = std::max(sum.max_abs_theta_dot_sw, std::abs(x.steering.theta_dot_sw));
    sum.peak_abs_theta_sw = std::max(sum.peak_abs_theta_sw, std::abs(x.steering.theta_sw));
    sum.peak_abs_tau_sw = std::max(sum.peak_abs_tau_sw, std::abs(ev.instant.tau_sw));
    sum.peak_abs_tau_c = std::max(sum.peak_abs_tau_c, std::abs(ev.instant.tau_c));
    if (!sum.collision && collision_check(x.vehicle, cfg.obstacle)) {
      sum.collision = true;
      sum.collision_time = t;
    }
    if (i % cfg.log_stride == 0) {
      out.log.samples.push_back(make_log_sample(t, x, ev.instant, target));
    }
    if (i == n_steps) break;
    try {
      x = rk4_step(x, t, cfg.dt, cfg);
    } catch (const DivergenceError& e) {
      sum.diverged = true;
      sum.divergence_time = e.time();
      sum.divergence_message = e.what();
      break;
    }
  }

  if (!out.log.empty()) {
    const EnergyAudit audit = energy_audit(out.log, target, cfg.passivity_tolerance);
    sum.energy_verdict = audit.verdict;
    sum.energy_margin_sup = audit.sup_margin;
    sum.energy_margin_final_quarter_gain = audit.final_quarter_gain;
  }
  return out;
}

}  // namespace hscsim
