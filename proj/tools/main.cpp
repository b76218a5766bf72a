/* Copyright 2026 The Spinpulse Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Robust pulse design for symmetric spin networks: designs amplitude pulses
// on the truncated Legendre moment dual of the parameterized Dicke-basis
// Ising dynamics, and evaluates them by direct ensemble simulation.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "spinpulse/commands.hpp"

namespace {

spinpulse::RunConfig load_or_exit(const std::string& config_path) {
  return spinpulse::load_config_file(config_path);
}

std::filesystem::path resolve_out(const spinpulse::RunConfig& config,
                                  const std::string& out_flag) {
  return out_flag.empty() ? std::filesystem::path(config.output_dir)
                          : std::filesystem::path(out_flag);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinpulse - robust pulse design for symmetric spin networks"};
  app.require_subcommand(1);

  std::string config_path, out_flag, pulse_path;

  CLI::App* design = app.add_subcommand("design", "design a robust pulse and evaluate it");
  design->add_option("--config", config_path, "run configuration file")->required();
  design->add_option("--out", out_flag, "output directory (overrides output_dir)");

  CLI::App* simulate = app.add_subcommand("simulate", "evaluate an existing pulse");
  simulate->add_option("--config", config_path, "run configuration file")->required();
  simulate->add_option("--pulse", pulse_path, "pulse.csv to evaluate")->required();
  simulate->add_option("--out", out_flag, "output directory (overrides output_dir)");

  CLI::App* verify = app.add_subcommand("verify", "run the numerical invariant suite");
  verify->add_option("--config", config_path, "run configuration file")->required();
  verify->add_option("--out", out_flag, "output directory (overrides output_dir)");

  CLI11_PARSE(app, argc, argv);

  try {
    const spinpulse::RunConfig config = load_or_exit(config_path);
    const std::filesystem::path out_dir = resolve_out(config, out_flag);
    if (design->parsed()) {
      const int code = spinpulse::cmd_design(config, out_dir);
      if (code == spinpulse::kExitNotConverged) {
        std::fprintf(stderr, "design: stopped before convergence; best iterate written to %s\n",
                     out_dir.string().c_str());
      }
      return code;
    }
    if (simulate->parsed()) {
      return spinpulse::cmd_simulate(config, pulse_path, out_dir);
    }
    return spinpulse::cmd_verify(config, out_dir);
  } catch (const spinpulse::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return spinpulse::kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return spinpulse::kExitIoError;
  }
}
