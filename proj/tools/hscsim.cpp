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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hscsim/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hscsim: haptic shared control steering attack simulator"};
  app.require_subcommand(1);

  hscsim::Overrides ov;
  double dt = 0.0;
  double duration = 0.0;
  bool seed_free = false;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--dt", dt, "override scenario.dt [s]")->check(CLI::PositiveNumber);
    sub->add_option("--duration", duration, "override scenario.duration [s]")
        ->check(CLI::PositiveNumber);
    // Runs are deterministic already; the flag only makes that explicit.
    sub->add_flag("--seed-free", seed_free, "no randomness is used (accepted for scripts)");
  };

  std::string cfg_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "simulate one scenario");
  run->add_option("config", cfg_path, "scenario config")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  add_overrides(run);

  auto* vp = app.add_subcommand("validate-profile", "check the attack impedance profile");
  vp->add_option("config", cfg_path, "scenario config")->required();
  add_overrides(vp);

  std::string cfg_b;
  auto* cmp = app.add_subcommand("compare", "run two scenarios and diff them");
  cmp->add_option("a", cfg_path, "first config")->required();
  cmp->add_option("b", cfg_b, "second config")->required();
  cmp->add_option("--out", out_dir, "output directory")->required();
  add_overrides(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : hscsim::to_int(hscsim::ExitStatus::config_error);
  }

  for (auto* sub : {run, vp, cmp}) {
    if (sub->count("--dt")) ov.dt = dt;
    if (sub->count("--duration")) ov.duration = duration;
  }

  hscsim::ExitStatus st = hscsim::ExitStatus::config_error;
  try {
    if (*run) {
      st = hscsim::cmd_run(cfg_path, out_dir, ov, std::cout, std::cerr);
    } else if (*vp) {
      st = hscsim::cmd_validate_profile(cfg_path, ov, std::cout, std::cerr);
    } else if (*cmp) {
      st = hscsim::cmd_compare(cfg_path, cfg_b, out_dir, ov, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    st = hscsim::ExitStatus::config_error;
  }
  return hscsim::to_int(st);
}
