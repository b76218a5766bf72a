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
#include "spinpulse/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinpulse {
namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

// Strict double parse of a full token.
double parse_double(const std::string& token, const std::filesystem::path& path, int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(value)) {
    fail(path, "line " + std::to_string(line) + ": expected a finite number, got '" + token +
                   "'");
  }
  return value;
}

}  // namespace

std::string format_g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

RunSummary make_run_summary(const FidelityMap& map, const ControlPulse& pulse) {
  RunSummary s;
  s.fidelity = summarize(map);
  s.i_ux = effort_index(pulse.ux, pulse.dt);
  s.i_uz = effort_index(pulse.uz, pulse.dt);
  s.i_dux = effort_index(slew_samples(pulse.ux, pulse.dt), pulse.dt);
  s.i_duz = effort_index(slew_samples(pulse.uz, pulse.dt), pulse.dt);
  return s;
}

void write_pulse_csv(const std::filesystem::path& path, const ControlPulse& pulse) {
  std::ofstream out = open_out(path);
  out << "t,u_x,u_z\n";
  for (Eigen::Index k = 0; k < pulse.steps(); ++k) {
    out << format_g17(pulse.dt * static_cast<double>(k)) << ',' << format_g17(pulse.ux(k))
        << ',' << format_g17(pulse.uz(k)) << '\n';
  }
  if (!out.good()) fail(path, "write failed");
}

ControlPulse read_pulse_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");

  std::string line;
  if (!std::getline(in, line) || line != "t,u_x,u_z") {
    fail(path, "expected header 't,u_x,u_z'");
  }
  std::vector<double> times, ux, uz;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t_tok, x_tok, z_tok;
    if (!std::getline(row, t_tok, ',') || !std::getline(row, x_tok, ',') ||
        !std::getline(row, z_tok)) {
      fail(path, "line " + std::to_string(lineno) + ": expected 3 comma-separated fields");
    }
    times.push_back(parse_double(t_tok, path, lineno));
    ux.push_back(parse_double(x_tok, path, lineno));
    uz.push_back(parse_double(z_tok, path, lineno));
  }
  if (times.size() < 2) {
    // A single sample carries no grid spacing; reject rather than guess.
    fail(path, "need at least 2 samples to infer the time step");
  }
  if (std::abs(times.front()) > 1e-12) fail(path, "time grid must start at 0");

  ControlPulse pulse;
  const std::size_t n = times.size();
  pulse.dt = times[1] - times[0];
  if (!(pulse.dt > 0.0)) fail(path, "time grid must be strictly increasing");
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = pulse.dt * static_cast<double>(k);
    if (std::abs(times[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      fail(path, "non-uniform time grid at row " + std::to_string(k + 2));
    }
  }
  pulse.ux = Eigen::Map<const Eigen::VectorXd>(ux.data(), static_cast<Eigen::Index>(n));
  pulse.uz = Eigen::Map<const Eigen::VectorXd>(uz.data(), static_cast<Eigen::Index>(n));
  validate(pulse);
  return pulse;
}

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<IterationRecord>& history) {
  std::ofstream out = open_out(path);
  out << "iter,objective,lambda,accepted\n";
  for (const IterationRecord& rec : history) {
    out << rec.iter << ',' << format_g17(rec.objective) << ',' << format_g17(rec.lambda) << ','
        << (rec.accepted ? 1 : 0) << '\n';
  }
  if (!out.good()) fail(path, "write failed");
}

void write_fidelity_map_csv(const std::filesystem::path& path, const FidelityMap& map) {
  std::ofstream out = open_out(path);
  out << "xi,zeta,fidelity\n";
  for (Eigen::Index j = 0; j < map.grid.zeta_nodes.size(); ++j) {
    for (Eigen::Index i = 0; i < map.grid.xi_nodes.size(); ++i) {
      out << format_g17(map.grid.xi_nodes(i)) << ',' << format_g17(map.grid.zeta_nodes(j))
          << ',' << format_g17(map.values(i, j)) << '\n';
    }
  }
  if (!out.good()) fail(path, "write failed");
}

void write_summary_json(const std::filesystem::path& path, const RunSummary& summary) {
  std::ofstream out = open_out(path);
  out << "{\n";
  out << "  \"max_fidelity\": " << format_g17(summary.fidelity.max) << ",\n";
  out << "  \"mean_fidelity\": " << format_g17(summary.fidelity.mean) << ",\n";
  out << "  \"min_fidelity\": " << format_g17(summary.fidelity.min) << ",\n";
  out << "  \"I_ux\": " << format_g17(summary.i_ux) << ",\n";
  out << "  \"I_uz\": " << format_g17(summary.i_uz) << ",\n";
  out << "  \"I_dux\": " << format_g17(summary.i_dux) << ",\n";
  out << "  \"I_duz\": " << format_g17(summary.i_duz) << "\n";
  out << "}\n";
  if (!out.good()) fail(path, "write failed");
}

void write_moments_csv(const std::filesystem::path& path, const MomentState& mom,
                       const SpinNetwork& net) {
  if (net.dim() != mom.dim_a) {
    throw std::invalid_argument("write_moments_csv: network dimension mismatch");
  }
  std::ofstream out = open_out(path);
  out << "a,i,j,re,im\n";
  for (int j = 0; j <= mom.order_zeta; ++j) {
    for (int i = 0; i <= mom.order_xi; ++i) {
      for (int a = 0; a < mom.dim_a; ++a) {
        const Complex value = mom.at(a, i, j);
        out << format_g17(net.m_value(a)) << ',' << i << ',' << j << ','
            << format_g17(value.real()) << ',' << format_g17(value.imag()) << '\n';
      }
    }
  }
  if (!out.good()) fail(path, "write failed");
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
  if (!out.good()) fail(path, "write failed");
}

}  // namespace spinpulse
