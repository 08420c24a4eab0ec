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
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hscsim/impedance.hpp"
#include "hscsim/simulation.hpp"

namespace hscsim {

enum class EnergyVerdict { passive, non_passive };

inline const char* to_string(EnergyVerdict v) {
  return v == EnergyVerdict::passive ? "passive" : "non-passive";
}

/// Energy bookkeeping of the target with respect to the port
/// (theta_d_dot, alpha_T_sw tau_sw + alpha_T_c tau_c).
///
///   E_supplied(t) = trapezoidal integral of the supplied power on the log grid
///   G(t)          = V_a(t) - V_a(0) - E_supplied(t)
///
/// A passive target keeps G <= 0. The verdict is non-passive iff sup G
/// exceeds the tolerance.
struct EnergyAudit {
  std::vector<double> t;
  std::vector<double> supplied_energy;
  std::vector<double> storage;
  std::vector<double> generation_margin;
  double sup_margin = 0.0;
  double final_quarter_gain = 0.0;  // G(end) - G(at 3/4 of the log)
  double tolerance = 1e-9;
  EnergyVerdict verdict = EnergyVerdict::passive;
};

inline EnergyAudit energy_audit(const TimeSeriesLog& log, const TargetParams& target,
                                double tolerance = 1e-9) {
  if (log.empty()) throw std::invalid_argument("energy_audit: empty log");
  const std::size_t n = log.size();
  EnergyAudit a;
  a.tolerance = tolerance;
  a.t.resize(n);
  a.supplied_energy.resize(n);
  a.storage.resize(n);
  a.generation_margin.resize(n);

  double prev_power = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const LogSample& s = log.samples[i];
    const TargetState& x = s.state.target;
    const double power = x.theta_dot_d * target_input(s.tau_sw, s.tau_c, target);
    a.t[i] = s.t;
    a.storage[i] = storage_value_unchecked(x, s.t, target);
    a.supplied_energy[i] =
        i == 0 ? 0.0 : a.supplied_energy[i - 1] + 0.5 * (power + prev_power) * (s.t - a.t[i - 1]);
    a.generation_margin[i] = a.storage[i] - a.storage[0] - a.supplied_energy[i];
    prev_power = power;
  }
  a.sup_margin = *std::max_element(a.generation_margin.begin(), a.generation_margin.end());
  const std::size_t q = (3 * (n - 1)) / 4;
  a.final_quarter_gain = a.generation_margin[n - 1] - a.generation_margin[q];
  a.verdict = a.sup_margin > tolerance ? EnergyVerdict::non_passive : EnergyVerdict::passive;
  return a;
}

}  // namespace hscsim
