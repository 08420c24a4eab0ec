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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hscsim/errors.hpp"
#include "hscsim/impedance.hpp"
#include "hscsim/simulation.hpp"

namespace hscsim {

/// Any problem with a scenario file. field() is "section.key" when the
/// problem is attributable to one entry.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& field, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError(field, "expected a number, got '" + s + "'");
  }
  return v;
}

inline std::vector<double> parse_list(const std::string& field, std::string_view text) {
  std::string s(text);
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(field, tok));
  return out;
}

inline bool parse_bool(const std::string& field, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ConfigError(field, "expected true/false, got '" + s + "'");
}

inline std::string format_double(double v) {
  v += 0.0;  // no "-0" in output
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest text that reads back to the same double.
inline std::string format_short(double v) {
  v += 0.0;
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_profile_table(const std::vector<ProfileSample>& rows) {
  std::string out = "t,K,B,K_dot,B_dot\n";
  for (const auto& r : rows) {
    out += format_double(r.t) + ',' + format_double(r.K) + ',' + format_double(r.B) + ',' +
           format_double(r.K_dot) + ',' + format_double(r.B_dot) + '\n';
  }
  return out;
}

template <int N>
Eigen::Matrix<double, N, 1> parse_diagonal(const std::string& field, std::string_view text) {
  const std::vector<double> v = parse_list(field, text);
  Eigen::Matrix<double, N, 1> out;
  if (v.size() == 1) {
    out.setConstant(v[0]);
  } else if (v.size() == static_cast<std::size_t>(N)) {
    for (int i = 0; i < N; ++i) out(i) = v[static_cast<std::size_t>(i)];
  } else {
    throw ConfigError(field, "expected 1 or " + std::to_string(N) + " numbers");
  }
  return out;
}

inline std::vector<ProfileSample> load_profile_table(const std::string& field,
                                                     const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(field, "cannot open sample table '" + path.string() + "'");
  std::vector<ProfileSample> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || (lineno == 1 && t[0] == 't')) continue;
    const std::vector<double> v = parse_list(field, t);
    if (v.size() != 5) {
      throw ConfigError(field, path.string() + ":" + std::to_string(lineno) +
                                   ": expected t,K,B,K_dot,B_dot");
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  return rows;
}

}  // namespace detail

/// Parses an INI-style scenario description:
///
///   [section]
///   key = value   ; comment
///
/// Every key is optional and defaults to the built-in scenario; unknown
/// sections or keys are rejected. Relative paths (the sampled profile table)
/// resolve against `base_dir`. The returned config has passed validate().
inline ScenarioConfig parse_config_text(const std::string& text,
                                        const std::filesystem::path& base_dir = {}) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", std::string("line ") + std::to_string(e.line()) + ": " +
                                    e.message());
  }

  ScenarioConfig cfg;
  std::string profile_kind = "exponential";
  std::string sample_table;
  double K0 = cfg.attack_target.profile.K0();
  double B0 = cfg.attack_target.profile.B0();
  double growth = cfg.attack_target.profile.growth_rate();
  double nominal_K = cfg.nominal_target.profile.K0();
  double nominal_B = cfg.nominal_target.profile.B0();
  std::string estimates_sw;
  std::string estimates_c;

  using Setter = std::function<void(const std::string& field, const std::string& value)>;
  auto num = [](double& slot) -> Setter {
    return [&slot](const std::string& f, const std::string& v) { slot = detail::parse_double(f, v); };
  };
  auto text_slot = [](std::string& slot) -> Setter {
    return [&slot](const std::string&, const std::string& v) { slot = detail::trim(v); };
  };
  auto count = [](std::size_t& slot) -> Setter {
    return [&slot](const std::string& f, const std::string& v) {
      const double d = detail::parse_double(f, v);
      if (!(d >= 0.0) || d != std::floor(d)) throw ConfigError(f, "expected a non-negative integer");
      slot = static_cast<std::size_t>(d);
    };
  };

  const std::map<std::string, std::map<std::string, Setter>> schema = {
      {"scenario",
       {{"mode",
         [&cfg](const std::string& f, const std::string& v) {
           const std::string m = detail::trim(v);
           if (m == "nominal") {
             cfg.mode = Mode::nominal;
           } else if (m == "attack") {
             cfg.mode = Mode::attack;
           } else {
             throw ConfigError(f, "expected nominal or attack, got '" + m + "'");
           }
         }},
        {"dt", num(cfg.dt)},
        {"duration", num(cfg.duration)},
        {"log_stride", count(cfg.log_stride)},
        {"settle_time", num(cfg.settle_time)},
        {"passivity_tolerance", num(cfg.passivity_tolerance)},
        {"divergence_limit", num(cfg.divergence_limit)},
        {"validation_samples", count(cfg.validation_samples)}}},
      {"steering",
       {{"I_sw", num(cfg.steering.I_sw)},
        {"I_c", num(cfg.steering.I_c)},
        {"B_sw", num(cfg.steering.B_sw)},
        {"B_c", num(cfg.steering.B_c)},
        {"K_sw", num(cfg.steering.K_sw)},
        {"K_c", num(cfg.steering.K_c)},
        {"alpha_sw", num(cfg.steering.alpha_sw)},
        {"alpha_c", num(cfg.steering.alpha_c)},
        {"gamma", num(cfg.steering.gamma)},
        {"C_d", num(cfg.steering.C_d)}}},
      {"target",
       {{"I_T", num(cfg.attack_target.I_T)},
        {"alpha", num(cfg.attack_target.alpha)},
        {"alpha_T_sw", num(cfg.attack_target.alpha_T_sw)},
        {"alpha_T_c", num(cfg.attack_target.alpha_T_c)},
        {"profile", text_slot(profile_kind)},
        {"K0", num(K0)},
        {"B0", num(B0)},
        {"growth_rate", num(growth)},
        {"samples", text_slot(sample_table)}}},
      {"nominal_target",
       {{"I_T", num(cfg.nominal_target.I_T)},
        {"K", num(nominal_K)},
        {"B", num(nominal_B)},
        {"alpha_T_sw", num(cfg.nominal_target.alpha_T_sw)},
        {"alpha_T_c", num(cfg.nominal_target.alpha_T_c)}}},
      {"controller",
       {{"mu_sw", num(cfg.gains.mu_sw)},
        {"mu_c", num(cfg.gains.mu_c)},
        {"k_sw", num(cfg.gains.k_sw)},
        {"k_c", num(cfg.gains.k_c)},
        {"gamma_sw",
         [&cfg](const std::string& f, const std::string& v) {
           cfg.gains.gamma_sw = detail::parse_diagonal<4>(f, v);
         }},
        {"gamma_c",
         [&cfg](const std::string& f, const std::string& v) {
           cfg.gains.gamma_c = detail::parse_diagonal<8>(f, v);
         }},
        {"adapt",
         [&cfg](const std::string& f, const std::string& v) { cfg.adapt = detail::parse_bool(f, v); }},
        {"phi_hat_sw0", text_slot(estimates_sw)},
        {"phi_hat_c0", text_slot(estimates_c)}}},
      {"vehicle",
       {{"mass", num(cfg.vehicle.mass)},
        {"yaw_inertia", num(cfg.vehicle.yaw_inertia)},
        {"front_axle_distance", num(cfg.vehicle.front_axle_distance)},
        {"rear_axle_distance", num(cfg.vehicle.rear_axle_distance)},
        {"front_cornering_stiffness", num(cfg.vehicle.front_cornering_stiffness)},
        {"rear_cornering_stiffness", num(cfg.vehicle.rear_cornering_stiffness)},
        {"front_peak_force", num(cfg.vehicle.front_peak_force)},
        {"rear_peak_force", num(cfg.vehicle.rear_peak_force)},
        {"longitudinal_speed", num(cfg.vehicle.longitudinal_speed)},
        {"steering_ratio", num(cfg.vehicle.steering_ratio)}}},
      {"driver",
       {{"kp", num(cfg.driver.kp)},
        {"kd", num(cfg.driver.kd)},
        {"saturation", num(cfg.driver.saturation)},
        {"start_time", num(cfg.driver.reference.start_time)},
        {"lobe_period", num(cfg.driver.reference.lobe_period)},
        {"hold", num(cfg.driver.reference.hold)},
        {"amplitude", num(cfg.driver.reference.amplitude)}}},
      {"obstacle",
       {{"x_min", num(cfg.obstacle.x_min)},
        {"x_max", num(cfg.obstacle.x_max)},
        {"y_min", num(cfg.obstacle.y_min)},
        {"y_max", num(cfg.obstacle.y_max)}}},
      {"initial",
       {{"theta_sw", num(cfg.initial_steering.theta_sw)},
        {"theta_dot_sw", num(cfg.initial_steering.theta_dot_sw)},
        {"theta_c", num(cfg.initial_steering.theta_c)},
        {"theta_dot_c", num(cfg.initial_steering.theta_dot_c)},
        {"theta_d", num(cfg.initial_target.theta_d)},
        {"theta_dot_d", num(cfg.initial_target.theta_dot_d)},
        {"X", num(cfg.initial_vehicle.x)},
        {"Y", num(cfg.initial_vehicle.y)},
        {"psi", num(cfg.initial_vehicle.psi)},
        {"v_y", num(cfg.initial_vehicle.v_y)},
        {"r_yaw", num(cfg.initial_vehicle.yaw_rate)}}},
  };

  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) {
      throw ConfigError(section, "key outside any section");
    }
    const auto sec = schema.find(section);
    if (sec == schema.end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : keys) {
      const std::string field = section + "." + key;
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end()) throw ConfigError(field, "unknown key");
      // Inline comments after the value.
      const std::string& raw = value.data();
      setter->second(field, raw.substr(0, raw.find_first_of(";#")));
    }
  }

  if (profile_kind == "constant") {
    cfg.attack_target.profile = ImpedanceProfile::constant(K0, B0);
  } else if (profile_kind == "exponential") {
    cfg.attack_target.profile = ImpedanceProfile::exponential(K0, B0, growth);
  } else if (profile_kind == "sampled") {
    if (sample_table.empty()) throw ConfigError("target.samples", "required for sampled profile");
    std::filesystem::path p(sample_table);
    if (p.is_relative()) p = base_dir / p;
    try {
      cfg.attack_target.profile =
          ImpedanceProfile::sampled(detail::load_profile_table("target.samples", p));
    } catch (const ConfigError&) {
      throw;
    } catch (const ParameterError& e) {
      throw ConfigError(e.field(), e.what());
    }
  } else {
    throw ConfigError("target.profile", "expected constant, exponential or sampled");
  }
  cfg.nominal_target.alpha = 0.0;
  cfg.nominal_target.profile = ImpedanceProfile::constant(nominal_K, nominal_B);
  if (!(nominal_K > 0.0)) throw ConfigError("nominal_target.K", "must be > 0");
  if (!(nominal_B > 0.0)) throw ConfigError("nominal_target.B", "must be > 0");

  try {
    if (estimates_sw == "true") {
      cfg.initial_estimates.phi_hat_sw = true_params_sw(cfg.steering);
    } else if (!estimates_sw.empty()) {
      const auto v = detail::parse_list("controller.phi_hat_sw0", estimates_sw);
      if (v.size() != 4) throw ConfigError("controller.phi_hat_sw0", "expected 4 numbers or 'true'");
      for (int i = 0; i < 4; ++i) cfg.initial_estimates.phi_hat_sw(i) = v[static_cast<std::size_t>(i)];
    }
    if (estimates_c == "true") {
      cfg.initial_estimates.phi_hat_c = true_params_c(cfg.steering);
    } else if (!estimates_c.empty()) {
      const auto v = detail::parse_list("controller.phi_hat_c0", estimates_c);
      if (v.size() != 8) throw ConfigError("controller.phi_hat_c0", "expected 8 numbers or 'true'");
      for (int i = 0; i < 8; ++i) cfg.initial_estimates.phi_hat_c(i) = v[static_cast<std::size_t>(i)];
    }
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const ParameterError& e) {
    throw ConfigError(e.field(), e.what());
  }
  return cfg;
}

inline ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.parent_path());
}

/// Writes a config back in the same format at full precision. Sampled
/// profiles are written as a reference to `samples_path`.
inline std::string format_config(const ScenarioConfig& c, const std::string& samples_path = "") {
  std::ostringstream o;
  auto kv = [&o](const char* k, double v) { o << k << " = " << detail::format_short(v) << "\n"; };
  auto vec = [&o](const char* k, const auto& v) {
    o << k << " =";
    for (Eigen::Index i = 0; i < v.size(); ++i) o << ' ' << detail::format_short(v(i));
    o << "\n";
  };
  o << "[scenario]\nmode = " << to_string(c.mode) << "\n";
  kv("dt", c.dt);
  kv("duration", c.duration);
  o << "log_stride = " << c.log_stride << "\n";
  kv("settle_time", c.settle_time);
  kv("passivity_tolerance", c.passivity_tolerance);
  kv("divergence_limit", c.divergence_limit);
  o << "validation_samples = " << c.validation_samples << "\n";

  o << "\n[steering]\n";
  kv("I_sw", c.steering.I_sw);
  kv("I_c", c.steering.I_c);
  kv("B_sw", c.steering.B_sw);
  kv("B_c", c.steering.B_c);
  kv("K_sw", c.steering.K_sw);
  kv("K_c", c.steering.K_c);
  kv("alpha_sw", c.steering.alpha_sw);
  kv("alpha_c", c.steering.alpha_c);
  kv("gamma", c.steering.gamma);
  kv("C_d", c.steering.C_d);

  const TargetParams& t = c.attack_target;
  o << "\n[target]\n";
  kv("I_T", t.I_T);
  kv("alpha", t.alpha);
  kv("alpha_T_sw", t.alpha_T_sw);
  kv("alpha_T_c", t.alpha_T_c);
  switch (t.profile.kind()) {
    case ImpedanceProfile::Kind::constant:
      o << "profile = constant\n";
      kv("K0", t.profile.K0());
      kv("B0", t.profile.B0());
      break;
    case ImpedanceProfile::Kind::exponential:
      o << "profile = exponential\n";
      kv("K0", t.profile.K0());
      kv("B0", t.profile.B0());
      kv("growth_rate", t.profile.growth_rate());
      break;
    case ImpedanceProfile::Kind::sampled:
      o << "profile = sampled\nsamples = " << samples_path << "\n";
      break;
  }

  o << "\n[nominal_target]\n";
  kv("I_T", c.nominal_target.I_T);
  kv("K", c.nominal_target.profile.K0());
  kv("B", c.nominal_target.profile.B0());
  kv("alpha_T_sw", c.nominal_target.alpha_T_sw);
  kv("alpha_T_c", c.nominal_target.alpha_T_c);

  o << "\n[controller]\n";
  kv("mu_sw", c.gains.mu_sw);
  kv("mu_c", c.gains.mu_c);
  kv("k_sw", c.gains.k_sw);
  kv("k_c", c.gains.k_c);
  vec("gamma_sw", c.gains.gamma_sw);
  vec("gamma_c", c.gains.gamma_c);
  o << "adapt = " << (c.adapt ? "true" : "false") << "\n";
  vec("phi_hat_sw0", c.initial_estimates.phi_hat_sw);
  vec("phi_hat_c0", c.initial_estimates.phi_hat_c);

  o << "\n[vehicle]\n";
  kv("mass", c.vehicle.mass);
  kv("yaw_inertia", c.vehicle.yaw_inertia);
  kv("front_axle_distance", c.vehicle.front_axle_distance);
  kv("rear_axle_distance", c.vehicle.rear_axle_distance);
  kv("front_cornering_stiffness", c.vehicle.front_cornering_stiffness);
  kv("rear_cornering_stiffness", c.vehicle.rear_cornering_stiffness);
  kv("front_peak_force", c.vehicle.front_peak_force);
  kv("rear_peak_force", c.vehicle.rear_peak_force);
  kv("longitudinal_speed", c.vehicle.longitudinal_speed);
  kv("steering_ratio", c.vehicle.steering_ratio);

  o << "\n[driver]\n";
  kv("kp", c.driver.kp);
  kv("kd", c.driver.kd);
  kv("saturation", c.driver.saturation);
  kv("start_time", c.driver.reference.start_time);
  kv("lobe_period", c.driver.reference.lobe_period);
  kv("hold", c.driver.reference.hold);
  kv("amplitude", c.driver.reference.amplitude);

  o << "\n[obstacle]\n";
  kv("x_min", c.obstacle.x_min);
  kv("x_max", c.obstacle.x_max);
  kv("y_min", c.obstacle.y_min);
  kv("y_max", c.obstacle.y_max);

  o << "\n[initial]\n";
  kv("theta_sw", c.initial_steering.theta_sw);
  kv("theta_dot_sw", c.initial_steering.theta_dot_sw);
  kv("theta_c", c.initial_steering.theta_c);
  kv("theta_dot_c", c.initial_steering.theta_dot_c);
  kv("theta_d", c.initial_target.theta_d);
  kv("theta_dot_d", c.initial_target.theta_dot_d);
  kv("X", c.initial_vehicle.x);
  kv("Y", c.initial_vehicle.y);
  kv("psi", c.initial_vehicle.psi);
  kv("v_y", c.initial_vehicle.v_y);
  kv("r_yaw", c.initial_vehicle.yaw_rate);
  return o.str();
}

}  // namespace hscsim
