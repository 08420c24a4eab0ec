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

#include <gtest/gtest.h>

#include "hscsim/energy_audit.hpp"
#include "hscsim/scenario.hpp"

namespace hscsim {
namespace {

TEST(Audit, ZeroTrajectory) {
  TimeSeriesLog log;
  log.dt = 0.01;
  for (int i = 0; i < 50; ++i) {
    LogSample s;
    s.t = 0.01 * i;
    log.samples.push_back(s);
  }
  const EnergyAudit a = energy_audit(log, TargetParams{});
  for (std::size_t i = 0; i < log.size(); ++i) {
    EXPECT_EQ(a.supplied_energy[i], 0.0);
    EXPECT_EQ(a.generation_margin[i], 0.0);
  }
  EXPECT_EQ(a.verdict, EnergyVerdict::passive);
  EXPECT_STREQ(to_string(a.verdict), "passive");
}

TEST(Audit, EmptyLogRejected) {
  EXPECT_THROW(energy_audit(TimeSeriesLog{}, TargetParams{}), std::invalid_argument);
}

TEST(Audit, TrapezoidOnKnownPower) {
  // theta_d_dot = 1 and tau_sw = t give power t, so E = t^2 / 2 exactly.
  TargetParams p;
  p.alpha_T_c = 0.0;
  TimeSeriesLog log;
  for (int i = 0; i <= 100; ++i) {
    LogSample s;
    s.t = 0.01 * i;
    s.state.target.theta_dot_d = 1.0;
    s.tau_sw = s.t;
    log.samples.push_back(s);
  }
  const EnergyAudit a = energy_audit(log, p);
  EXPECT_NEAR(a.supplied_energy.back(), 0.5, 1e-14);
  EXPECT_NEAR(a.generation_margin.back(), a.storage.back() - a.storage.front() - 0.5, 1e-14);
}

TEST(Audit, NominalRunIsPassive) {
  const ScenarioConfig cfg;
  const RunResult r = run_scenario(cfg);
  const EnergyAudit a = energy_audit(r.log, cfg.active_target(), cfg.passivity_tolerance);
  for (double g : a.generation_margin) ASSERT_LE(g, 1e-9);
  EXPECT_EQ(a.verdict, EnergyVerdict::passive);
  // Dissipation dominates once the maneuver has supplied energy.
  EXPECT_LT(a.generation_margin.back(), -1e-3);
}

TEST(Audit, AttackRunGeneratesEnergy) {
  ScenarioConfig cfg;
  cfg.mode = Mode::attack;
  const RunResult r = run_scenario(cfg);
  const EnergyAudit a = energy_audit(r.log, cfg.active_target(), cfg.passivity_tolerance);
  EXPECT_EQ(a.verdict, EnergyVerdict::non_passive);
  EXPECT_STREQ(to_string(a.verdict), "non-passive");
  EXPECT_GT(a.sup_margin, 1e-3);
  EXPECT_GT(a.final_quarter_gain, 0.0);
  // Positive and growing over the last tenth of the log.
  const std::size_t n = a.generation_margin.size();
  const std::size_t k = n - n / 10;
  EXPECT_GT(a.generation_margin[k], 0.0);
  EXPECT_GT(a.generation_margin[n - 1], a.generation_margin[k]);
}

}  // namespace
}  // namespace hscsim
