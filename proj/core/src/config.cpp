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
#include "spinpulse/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "spinpulse/io.hpp"

namespace spinpulse {
namespace {

[[noreturn]] void fail_line(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& value, int line) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double parsed = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(parsed)) {
    fail_line(line, "expected a finite number, got '" + value + "'");
  }
  return parsed;
}

int to_int(const std::string& value, int line) {
  const double parsed = to_double(value, line);
  const int rounded = static_cast<int>(std::lround(parsed));
  if (std::abs(parsed - rounded) > 0.0) {
    fail_line(line, "expected an integer, got '" + value + "'");
  }
  return rounded;
}

bool to_bool(const std::string& value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail_line(line, "expected a boolean (true/false), got '" + value + "'");
}

void resolve_and_validate(RunConfig& c) {
  if (c.n_particles < 2) fail("n_particles must be >= 2");
  if (!(c.delta_xi >= 0.0 && c.delta_xi < 1.0)) fail("delta_xi must lie in [0, 1)");
  if (!(c.delta_zeta >= 0.0 && c.delta_zeta < 1.0)) fail("delta_zeta must lie in [0, 1)");
  if (!(c.T > 0.0)) fail("T must be positive");
  if (!(c.dt > 0.0)) fail("dt must be positive");

  const double ratio = c.T / c.dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio) || steps < 1.0) {
    fail("dt must divide T (T/dt = " + format_g17(ratio) + " is not integral)");
  }

  const bool two_param = c.delta_xi > 0.0 && c.delta_zeta > 0.0;
  auto resolve_order = [&](int order, double delta, const char* key) {
    if (delta == 0.0) {
      if (order > 0) {
        fail(std::string(key) + " must be 0 (or unset) when the axis is collapsed (delta = 0)");
      }
      return 0;
    }
    if (order < 0) return two_param ? 7 : 14;
    return order;
  };
  c.moment_order_xi = resolve_order(c.moment_order_xi, c.delta_xi, "moment_order_xi");
  c.moment_order_zeta = resolve_order(c.moment_order_zeta, c.delta_zeta, "moment_order_zeta");

  if (c.eval_grid_nx < 1 || c.eval_grid_nz < 1) fail("eval_grid nodes must be >= 1");
  if (c.delta_xi == 0.0) c.eval_grid_nx = 1;
  if (c.delta_zeta == 0.0) c.eval_grid_nz = 1;

  if (c.u_min > c.u_max) fail("u_min must not exceed u_max");
  if (c.u_init_x < c.u_min || c.u_init_x > c.u_max || c.u_init_z < c.u_min ||
      c.u_init_z > c.u_max) {
    fail("u_init must lie within [u_min, u_max]");
  }
  if (!(c.rate_value > 0.0)) fail("rate_value must be positive");
  if (c.homotopy_stages < 1) fail("homotopy_stages must be >= 1");
  if (c.max_outer_iters < 0) fail("max_outer_iters must be >= 0");
  if (!(c.objective_tol >= 0.0)) fail("objective_tol must be >= 0");
  if (!(c.lambda_init > 0.0)) fail("lambda_init must be positive");
  if (c.qp_max_iters < 1) fail("qp_max_iters must be >= 1");
  if (c.output_dir.empty()) fail("output_dir must not be empty");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  bool have_n = false, have_target = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail_line(lineno, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_line(lineno, "empty key");
    if (value.empty()) fail_line(lineno, "empty value for key '" + key + "'");

    if (key == "n_particles") {
      c.n_particles = to_int(value, lineno);
      have_n = true;
    } else if (key == "chi") {
      c.chi = to_double(value, lineno);
    } else if (key == "target_kind") {
      try {
        c.target_kind = parse_target_kind(value);
      } catch (const std::invalid_argument& e) {
        fail_line(lineno, e.what());
      }
      have_target = true;
    } else if (key == "delta_xi") {
      c.delta_xi = to_double(value, lineno);
    } else if (key == "delta_zeta") {
      c.delta_zeta = to_double(value, lineno);
    } else if (key == "T") {
      c.T = to_double(value, lineno);
    } else if (key == "dt") {
      c.dt = to_double(value, lineno);
    } else if (key == "moment_order_xi") {
      c.moment_order_xi = to_int(value, lineno);
    } else if (key == "moment_order_zeta") {
      c.moment_order_zeta = to_int(value, lineno);
    } else if (key == "u_init_x") {
      c.u_init_x = to_double(value, lineno);
    } else if (key == "u_init_z") {
      c.u_init_z = to_double(value, lineno);
    } else if (key == "u_min") {
      c.u_min = to_double(value, lineno);
    } else if (key == "u_max") {
      c.u_max = to_double(value, lineno);
    } else if (key == "rate_mode") {
      if (value == "literal_over_t") {
        c.rate_mode = SignalRestrictions::RateMode::kLiteralOverT;
      } else if (value == "constant") {
        c.rate_mode = SignalRestrictions::RateMode::kConstant;
      } else {
        fail_line(lineno, "rate_mode must be literal_over_t or constant");
      }
    } else if (key == "rate_value") {
      c.rate_value = to_double(value, lineno);
    } else if (key == "eval_grid_nx") {
      c.eval_grid_nx = to_int(value, lineno);
    } else if (key == "eval_grid_nz") {
      c.eval_grid_nz = to_int(value, lineno);
    } else if (key == "homotopy_stages") {
      c.homotopy_stages = to_int(value, lineno);
    } else if (key == "max_outer_iters") {
      c.max_outer_iters = to_int(value, lineno);
    } else if (key == "objective_tol") {
      c.objective_tol = to_double(value, lineno);
    } else if (key == "lambda_init") {
      c.lambda_init = to_double(value, lineno);
    } else if (key == "qp_max_iters") {
      c.qp_max_iters = to_int(value, lineno);
    } else if (key == "deterministic") {
      c.deterministic = to_bool(value, lineno);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else {
      fail_line(lineno, "unknown key '" + key + "'");
    }
  }

  if (!have_n) fail("missing required key 'n_particles'");
  if (!have_target) fail("missing required key 'target_kind'");
  resolve_and_validate(c);
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "n_particles = " << c.n_particles << '\n';
  out << "chi = " << format_g17(c.chi) << '\n';
  out << "target_kind = " << to_string(c.target_kind) << '\n';
  out << "delta_xi = " << format_g17(c.delta_xi) << '\n';
  out << "delta_zeta = " << format_g17(c.delta_zeta) << '\n';
  out << "T = " << format_g17(c.T) << '\n';
  out << "dt = " << format_g17(c.dt) << '\n';
  out << "moment_order_xi = " << c.moment_order_xi << '\n';
  out << "moment_order_zeta = " << c.moment_order_zeta << '\n';
  out << "u_init_x = " << format_g17(c.u_init_x) << '\n';
  out << "u_init_z = " << format_g17(c.u_init_z) << '\n';
  out << "u_min = " << format_g17(c.u_min) << '\n';
  out << "u_max = " << format_g17(c.u_max) << '\n';
  out << "rate_mode = "
      << (c.rate_mode == SignalRestrictions::RateMode::kLiteralOverT ? "literal_over_t"
                                                                     : "constant")
      << '\n';
  out << "rate_value = " << format_g17(c.rate_value) << '\n';
  out << "eval_grid_nx = " << c.eval_grid_nx << '\n';
  out << "eval_grid_nz = " << c.eval_grid_nz << '\n';
  out << "homotopy_stages = " << c.homotopy_stages << '\n';
  out << "max_outer_iters = " << c.max_outer_iters << '\n';
  out << "objective_tol = " << format_g17(c.objective_tol) << '\n';
  out << "lambda_init = " << format_g17(c.lambda_init) << '\n';
  out << "qp_max_iters = " << c.qp_max_iters << '\n';
  out << "deterministic = " << (c.deterministic ? "true" : "false") << '\n';
  out << "output_dir = " << c.output_dir << '\n';
  return out.str();
}

Eigen::Index config_steps(const RunConfig& c) {
  return static_cast<Eigen::Index>(std::llround(c.T / c.dt));
}

SpinNetwork config_network(const RunConfig& c) { return {c.n_particles, c.chi}; }

ParameterBox config_box(const RunConfig& c) { return {c.delta_xi, c.delta_zeta}; }

SignalRestrictions config_restrictions(const RunConfig& c) {
  SignalRestrictions restr;
  restr.x = {c.u_min, c.u_max};
  restr.z = {c.u_min, c.u_max};
  restr.rate_mode = c.rate_mode;
  restr.rate_value = c.rate_value;
  return restr;
}

SolverSettings config_solver(const RunConfig& c) {
  SolverSettings s;
  s.max_outer_iters = c.max_outer_iters;
  s.objective_tol = c.objective_tol;
  s.lambda_init = c.lambda_init;
  s.qp_max_iters = c.qp_max_iters;
  s.deterministic = c.deterministic;
  return s;
}

ControlPulse config_initial_pulse(const RunConfig& c) {
  return constant_pulse(c.u_init_x, c.u_init_z, c.dt, config_steps(c));
}

}  // namespace spinpulse
