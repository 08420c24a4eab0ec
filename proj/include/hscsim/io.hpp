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

#include <array>
#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hscsim/config.hpp"
#include "hscsim/scenario.hpp"
#include "hscsim/simulation.hpp"

namespace hscsim {

/// Columns after the state block, in CSV order.
inline constexpr std::array<std::string_view, 8> kSignalNames = {
    "tau_sw", "tau_c", "T_sw", "T_c", "theta_ddot_d", "V_a", "V_a_dot", "supplied_power"};

inline std::vector<std::string> timeseries_header() {
  std::vector<std::string> h{"t"};
  for (auto n : kStateNames) h.emplace_back(n);
  for (auto n : kSignalNames) h.emplace_back(n);
  return h;
}

namespace detail {

inline std::array<double, 1 + kStateSize + kSignalNames.size()> flatten(const LogSample& s) {
  std::array<double, 1 + kStateSize + kSignalNames.size()> row{};
  row[0] = s.t;
  const StateVector v = s.state.pack();
  for (std::size_t i = 0; i < kStateSize; ++i) row[1 + i] = v(static_cast<Eigen::Index>(i));
  const std::size_t o = 1 + kStateSize;
  row[o + 0] = s.tau_sw;
  row[o + 1] = s.tau_c;
  row[o + 2] = s.T_sw;
  row[o + 3] = s.T_c;
  row[o + 4] = s.theta_ddot_d;
  row[o + 5] = s.V_a;
  row[o + 6] = s.V_a_dot;
  row[o + 7] = s.supplied_power;
  return row;
}

}  // namespace detail

/// Comma separated, one header row, LF line endings, %.17g values.
inline void write_timeseries_csv(std::ostream& out, const TimeSeriesLog& log) {
  const auto header = timeseries_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  std::string line;
  for (const LogSample& s : log.samples) {
    line.clear();
    const auto row = detail::flatten(s);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      line += detail::format_double(row[i]);
    }
    line += '\n';
    out << line;
  }
}

/// Reads a CSV produced by write_timeseries_csv. Columns are matched by
/// name, so extra columns are ignored; a missing column is an error.
inline TimeSeriesLog read_timeseries_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("timeseries csv: empty input");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(detail::trim(c));
  }
  const auto wanted = timeseries_header();
  std::vector<std::size_t> index(wanted.size());
  for (std::size_t w = 0; w < wanted.size(); ++w) {
    std::size_t found = cols.size();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c] == wanted[w]) found = c;
    }
    if (found == cols.size()) throw std::runtime_error("timeseries csv: missing column " + wanted[w]);
    index[w] = found;
  }

  TimeSeriesLog log;
  std::vector<double> fields;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    fields.clear();
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
      if (ec != std::errc() || ptr != line.data() + end) {
        throw std::runtime_error("timeseries csv: bad number on line " + std::to_string(lineno));
      }
      fields.push_back(v);
      pos = end + 1;
    }
    if (fields.size() != cols.size()) {
      throw std::runtime_error("timeseries csv: wrong field count on line " + std::to_string(lineno));
    }
    StateVector sv;
    for (std::size_t i = 0; i < kStateSize; ++i) sv(static_cast<Eigen::Index>(i)) = fields[index[1 + i]];
    LogSample s;
    s.t = fields[index[0]];
    s.state = FullState::unpack(sv);
    const std::size_t o = 1 + kStateSize;
    s.tau_sw = fields[index[o + 0]];
    s.tau_c = fields[index[o + 1]];
    s.T_sw = fields[index[o + 2]];
    s.T_c = fields[index[o + 3]];
    s.theta_ddot_d = fields[index[o + 4]];
    s.V_a = fields[index[o + 5]];
    s.V_a_dot = fields[index[o + 6]];
    s.supplied_power = fields[index[o + 7]];
    log.samples.push_back(s);
  }
  if (log.samples.size() >= 2) log.dt = log.samples[1].t - log.samples[0].t;
  return log;
}

/// Flat JSON object; see README for the key list.
inline nlohmann::ordered_json summary_to_json(const Summary& s) {
  nlohmann::ordered_json j;
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  j["mode"] = to_string(s.mode);
  j["collision"] = s.collision;
  j["collision_time"] = opt(s.collision_time);
  j["diverged"] = s.diverged;
  j["divergence_time"] = opt(s.divergence_time);
  j["divergence_message"] = s.divergence_message;
  j["final_time"] = s.final_time;
  j["steps"] = s.steps;
  j["max_abs_e_sw"] = s.max_abs_e_sw;
  j["max_abs_e_c"] = s.max_abs_e_c;
  j["max_abs_e_sw_after_settle"] = s.max_abs_e_sw_after_settle;
  j["max_abs_e_c_after_settle"] = s.max_abs_e_c_after_settle;
  j["max_abs_theta_dot_sw"] = s.max_abs_theta_dot_sw;
  j["peak_abs_theta_sw"] = s.peak_abs_theta_sw;
  j["peak_abs_tau_sw"] = s.peak_abs_tau_sw;
  j["peak_abs_tau_c"] = s.peak_abs_tau_c;
  for (int i = 0; i < 4; ++i) j["phi_hat_sw_" + std::to_string(i)] = s.final_estimates.phi_hat_sw(i);
  for (int i = 0; i < 8; ++i) j["phi_hat_c_" + std::to_string(i)] = s.final_estimates.phi_hat_c(i);
  j["profile_accepted"] = s.profile_accepted;
  j["profile_warning"] = s.profile_warning;
  j["energy_verdict"] = to_string(s.energy_verdict);
  j["energy_margin_sup"] = s.energy_margin_sup;
  j["energy_margin_final_quarter_gain"] = s.energy_margin_final_quarter_gain;
  return j;
}

}  // namespace hscsim
