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
#ifndef SPINPULSE_COMMANDS_HPP_
#define SPINPULSE_COMMANDS_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "spinpulse/config.hpp"

namespace spinpulse {

// Process exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitVerifyFailed = 4;
inline constexpr int kExitIoError = 5;

// Runs the pulse design and writes pulse.csv, history.csv, fidelity_map.csv
// and summary.json into out_dir. Returns kExitOk on convergence,
// kExitNotConverged when the solver returned its best iterate with the flag
// down (files are still written).
int cmd_design(const RunConfig& config, const std::filesystem::path& out_dir);

// Evaluates an externally supplied pulse against the config's grid; writes
// fidelity_map.csv and summary.json. The pulse file must match the config's
// time grid.
int cmd_simulate(const RunConfig& config, const std::filesystem::path& pulse_csv,
                 const std::filesystem::path& out_dir);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass = false;
};

// Invariant suite: unitarity, Legendre orthogonality, the multiplication
// coupling identity, the moment/ensemble duality gap across truncation
// orders, and the sensitivity-vs-finite-difference check.
VerifyReport run_verify(const RunConfig& config);

// Writes verify_report.json into out_dir and prints one line per check.
// Returns kExitOk when every check passed, kExitVerifyFailed otherwise.
int cmd_verify(const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace spinpulse

#endif  // SPINPULSE_COMMANDS_HPP_
