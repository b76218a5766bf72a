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
#ifndef SPINPULSE_CONFIG_HPP_
#define SPINPULSE_CONFIG_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "spinpulse/design.hpp"
#include "spinpulse/qp.hpp"
#include "spinpulse/target.hpp"
#include "spinpulse/types.hpp"

namespace spinpulse {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key-value run configuration. Keys match the field names; '#' starts a
// comment. Required keys: n_particles, target_kind. Unset moment orders
// resolve to 0 on a collapsed axis, 14 in single-parameter mode and 7 per
// axis in two-parameter mode.
struct RunConfig {
  int n_particles = 0;
  double chi = 1.0;
  TargetKind target_kind = TargetKind::W;
  double delta_xi = 0.0;
  double delta_zeta = 0.0;
  double T = 9.0;
  double dt = 0.01;
  int moment_order_xi = -1;    // -1 = auto until resolved
  int moment_order_zeta = -1;  // -1 = auto until resolved
  double u_init_x = 3.0;
  double u_init_z = 3.0;
  double u_min = 0.0;
  double u_max = 40.0;
  SignalRestrictions::RateMode rate_mode = SignalRestrictions::RateMode::kLiteralOverT;
  double rate_value = 1e4;
  int eval_grid_nx = 21;
  int eval_grid_nz = 21;
  int homotopy_stages = 1;  // continuation stages over the uncertainty box
  int max_outer_iters = 200;
  double objective_tol = 1e-8;
  double lambda_init = 1.0;
  int qp_max_iters = 20000;
  bool deterministic = true;
  std::string output_dir = "out";
};

// Parses, fills defaults, resolves auto orders and validates; throws
// ConfigError with a line-anchored message on unknown keys, missing required
// keys or inconsistent values.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::filesystem::path& path);

// Canonical text form; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

// Derived pieces.
Eigen::Index config_steps(const RunConfig& config);
SpinNetwork config_network(const RunConfig& config);
ParameterBox config_box(const RunConfig& config);
SignalRestrictions config_restrictions(const RunConfig& config);
SolverSettings config_solver(const RunConfig& config);
ControlPulse config_initial_pulse(const RunConfig& config);

}  // namespace spinpulse

#endif  // SPINPULSE_CONFIG_HPP_
