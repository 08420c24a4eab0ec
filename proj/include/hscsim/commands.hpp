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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "hscsim/config.hpp"
#include "hscsim/impedance.hpp"
#include "hscsim/io.hpp"
#include "hscsim/scenario.hpp"

namespace hscsim {

enum class ExitStatus : int {
  success = 0,
  validation_failure = 1,
  diverged = 2,
  config_error = 3,
};

inline int to_int(ExitStatus s) { return static_cast<int>(s); }

struct Overrides {
  std::optional<double> dt;
  std::optional<double> duration;
};

/// parse_config plus command-line overrides, re-validated.
inline ScenarioConfig load_scenario(const std::filesystem::path& path, const Overrides& ov) {
  ScenarioConfig cfg = parse_config(path);
  if (ov.dt) cfg.dt = *ov.dt;
  if (ov.duration) cfg.duration = *ov.duration;
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.field(), e.what());
  }
  return cfg;
}

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline void print_profile(std::ostream& out, const ImpedanceProfile& p) {
  switch (p.kind()) {
    case ImpedanceProfile::Kind::constant:
      out << "profile: constant K_T = " << sci(p.K0()) << ", B_T = " << sci(p.B0()) << "\n";
      break;
    case ImpedanceProfile::Kind::exponential:
      out << "profile: exponential K_T = " << sci(p.K0()) << " exp(" << sci(p.growth_rate())
          << " t), B_T = " << sci(p.B0()) << "\n";
      break;
    case ImpedanceProfile::Kind::sampled:
      out << "profile: sampled, " << p.table().size() << " rows on [" << p.horizon().first << ", "
          << p.horizon().second << "] s\n";
      break;
  }
}

inline bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << content;
  return static_cast<bool>(f);
}

}  // namespace detail

/// Checks the [target] impedance profile over the scenario duration.
inline ExitStatus cmd_validate_profile(const std::filesystem::path& config, const Overrides& ov,
                                       std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  ValidationReport rep;
  try {
    cfg = load_scenario(config, ov);
    rep = validate_profile(cfg.attack_target, cfg.duration, cfg.validation_samples);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return ExitStatus::config_error;
  }
  const TargetParams& t = cfg.attack_target;
  detail::print_profile(out, t.profile);
  out << "I_T = " << detail::sci(t.I_T) << ", alpha = " << detail::sci(t.alpha)
      << ", alpha_T_sw = " << t.alpha_T_sw << ", alpha_T_c = " << t.alpha_T_c << "\n";
  out << "horizon: [0, " << rep.horizon << "] s, " << rep.samples << " samples\n";
  auto line = [&out](const char* name, double margin, bool ok) {
    out << "  " << name << "  min margin " << detail::sci(margin) << "  " << (ok ? "ok" : "VIOLATED")
        << "\n";
  };
  line("damping_bound  alpha I_T - B_T > 0                       ", rep.margins.rho_damping,
       rep.margins.rho_damping > 0.0);
  line("growth_bound   K_T'/2 + alpha B_T'/2 - alpha K_T > 0     ", rep.margins.rho_growth,
       rep.margins.rho_growth > 0.0);
  line("beta_nonneg    K_T + alpha B_T - alpha^2 I_T >= 0        ", rep.margins.beta_min,
       rep.margins.beta_min >= 0.0);
  out << "  admissible region (t > 0)                                min slack "
      << detail::sci(rep.margins.region_slack_min) << "  "
      << (rep.region_constraint_holds ? "holds" : "does not hold") << "\n";
  if (rep.accepted) {
    out << "verdict: accepted\n";
    return ExitStatus::success;
  }
  out << "verdict: rejected (" << to_string(rep.violated_condition) << " first violated at t = "
      << rep.first_violation_time.value_or(0.0) << " s)\n";
  return ExitStatus::validation_failure;
}

/// Runs one scenario and writes timeseries.csv, summary.json and the
/// effective config (config.cfg) into out_dir.
inline ExitStatus cmd_run(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                          const Overrides& ov, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = load_scenario(config, ov);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return ExitStatus::config_error;
  }
  const RunResult res = run_scenario(cfg);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ostringstream csv;
  write_timeseries_csv(csv, res.log);
  const std::string json = summary_to_json(res.summary).dump(2) + "\n";
  bool ok = !ec && detail::write_file(out_dir / "timeseries.csv", csv.str()) &&
            detail::write_file(out_dir / "summary.json", json);
  if (cfg.attack_target.profile.kind() == ImpedanceProfile::Kind::sampled) {
    ok = ok && detail::write_file(out_dir / "profile_samples.csv",
                                  detail::format_profile_table(cfg.attack_target.profile.table())) &&
         detail::write_file(out_dir / "config.cfg", format_config(cfg, "profile_samples.csv"));
  } else {
    ok = ok && detail::write_file(out_dir / "config.cfg", format_config(cfg));
  }
  if (!ok) {
    err << "i/o error: cannot write into '" << out_dir.string() << "'\n";
    return ExitStatus::config_error;
  }

  const Summary& s = res.summary;
  out << "mode: " << to_string(s.mode) << ", samples: " << res.log.size()
      << ", final t: " << s.final_time << " s\n";
  if (!s.profile_accepted) out << "warning: " << s.profile_warning << "\n";
  out << "collision: " << (s.collision ? "yes" : "no");
  if (s.collision_time) out << " at t = " << *s.collision_time << " s";
  out << "\nenergy verdict: " << to_string(s.energy_verdict)
      << " (sup margin " << detail::sci(s.energy_margin_sup) << " J)\n";
  if (s.diverged) {
    err << "diverged: " << s.divergence_message << "\n";
    return ExitStatus::diverged;
  }
  return ExitStatus::success;
}

struct CompareReport {
  std::optional<double> divergence_time;  // first sample with |theta_sw,a - theta_sw,b| > 0.01 rad
  bool collision_a = false;
  bool collision_b = false;
  double peak_driver_torque_ratio = 0.0;  // peak |tau_sw| of b over a
  double peak_column_torque_ratio = 0.0;  // peak |tau_c| of b over a
  double max_abs_theta_sw_diff = 0.0;
  std::size_t samples = 0;
};

inline CompareReport compare_runs(const RunResult& a, const RunResult& b, std::ostream* csv) {
  constexpr double kDivergenceThreshold = 0.01;
  CompareReport rep;
  rep.collision_a = a.summary.collision;
  rep.collision_b = b.summary.collision;
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : (num > 0.0 ? INFINITY : 1.0); };
  rep.peak_driver_torque_ratio = ratio(b.summary.peak_abs_tau_sw, a.summary.peak_abs_tau_sw);
  rep.peak_column_torque_ratio = ratio(b.summary.peak_abs_tau_c, a.summary.peak_abs_tau_c);
  const std::size_t n = std::min(a.log.size(), b.log.size());
  rep.samples = n;
  if (csv) {
    *csv << "t,theta_sw_a,theta_sw_b,d_theta_sw,theta_c_a,theta_c_b,d_theta_c,theta_d_a,theta_d_b,"
            "d_theta_d,X_a,X_b,Y_a,Y_b,d_Y,tau_sw_a,tau_sw_b,d_tau_sw,tau_c_a,tau_c_b,d_tau_c\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    const LogSample& sa = a.log.samples[i];
    const LogSample& sb = b.log.samples[i];
    const double d_sw = sb.state.steering.theta_sw - sa.state.steering.theta_sw;
    rep.max_abs_theta_sw_diff = std::max(rep.max_abs_theta_sw_diff, std::abs(d_sw));
    if (!rep.divergence_time && std::abs(d_sw) > kDivergenceThreshold) rep.divergence_time = sa.t;
    if (csv) {
      using detail::format_double;
      const double v[] = {sa.t,
                          sa.state.steering.theta_sw, sb.state.steering.theta_sw, d_sw,
                          sa.state.steering.theta_c, sb.state.steering.theta_c,
                          sb.state.steering.theta_c - sa.state.steering.theta_c,
                          sa.state.target.theta_d, sb.state.target.theta_d,
                          sb.state.target.theta_d - sa.state.target.theta_d,
                          sa.state.vehicle.x, sb.state.vehicle.x,
                          sa.state.vehicle.y, sb.state.vehicle.y,
                          sb.state.vehicle.y - sa.state.vehicle.y,
                          sa.tau_sw, sb.tau_sw, sb.tau_sw - sa.tau_sw,
                          sa.tau_c, sb.tau_c, sb.tau_c - sa.tau_c};
      std::string row;
      for (std::size_t k = 0; k < std::size(v); ++k) {
        if (k) row += ',';
        row += format_double(v[k]);
      }
      *csv << row << '\n';
    }
  }
  return rep;
}

/// Runs both scenarios (concurrently), writes compare.csv and report.txt.
/// The configs must agree on dt, duration and log stride.
inline ExitStatus cmd_compare(const std::filesystem::path& config_a,
                              const std::filesystem::path& config_b,
                              const std::filesystem::path& out_dir, const Overrides& ov,
                              std::ostream& out, std::ostream& err) {
  ScenarioConfig a;
  ScenarioConfig b;
  try {
    a = load_scenario(config_a, ov);
    b = load_scenario(config_b, ov);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return ExitStatus::config_error;
  }
  if (a.dt != b.dt) {
    err << "config error: scenario.dt differs (" << a.dt << " vs " << b.dt << ")\n";
    return ExitStatus::config_error;
  }
  if (a.duration != b.duration) {
    err << "config error: scenario.duration differs (" << a.duration << " vs " << b.duration << ")\n";
    return ExitStatus::config_error;
  }
  if (a.log_stride != b.log_stride) {
    err << "config error: scenario.log_stride differs\n";
    return ExitStatus::config_error;
  }

  auto fut = std::async(std::launch::async, [&b] { return run_scenario(b); });
  const RunResult ra = run_scenario(a);
  const RunResult rb = fut.get();

  std::ostringstream csv;
  const CompareReport rep = compare_runs(ra, rb, &csv);
  std::ostringstream text;
  text << "a: " << config_a.string() << " (" << to_string(a.mode) << ")\n";
  text << "b: " << config_b.string() << " (" << to_string(b.mode) << ")\n";
  text << "aligned samples: " << rep.samples << "\n";
  text << "divergence time (|theta_sw,a - theta_sw,b| > 0.01 rad): ";
  if (rep.divergence_time) {
    text << *rep.divergence_time << " s\n";
  } else {
    text << "none\n";
  }
  text << "max |theta_sw,a - theta_sw,b|: " << detail::sci(rep.max_abs_theta_sw_diff) << " rad\n";
  text << "collision a: " << (rep.collision_a ? "true" : "false") << "\n";
  text << "collision b: " << (rep.collision_b ? "true" : "false") << "\n";
  text << "peak driver torque ratio (b/a): " << detail::sci(rep.peak_driver_torque_ratio) << "\n";
  text << "peak column torque ratio (b/a): " << detail::sci(rep.peak_column_torque_ratio) << "\n";

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !detail::write_file(out_dir / "compare.csv", csv.str()) ||
      !detail::write_file(out_dir / "report.txt", text.str())) {
    err << "i/o error: cannot write into '" << out_dir.string() << "'\n";
    return ExitStatus::config_error;
  }
  out << text.str();
  if (ra.summary.diverged || rb.summary.diverged) {
    err << "at least one run diverged; aligned over the common prefix\n";
    return ExitStatus::diverged;
  }
  return ExitStatus::success;
}

}  // namespace hscsim
