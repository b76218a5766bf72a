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
#ifndef SPINPULSE_IO_HPP_
#define SPINPULSE_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "spinpulse/design.hpp"
#include "spinpulse/ensemble_grid.hpp"
#include "spinpulse/moments.hpp"
#include "spinpulse/types.hpp"

namespace spinpulse {

// All emitted files use '.' decimals and 17-significant-digit floats
// (round-trip exact for doubles), independent of any locale.
std::string format_g17(double value);

// Fidelity extrema plus the pulse effort indices that accompany every run.
struct RunSummary {
  MapSummary fidelity;
  double i_ux = 0.0;
  double i_uz = 0.0;
  double i_dux = 0.0;
  double i_duz = 0.0;
};

RunSummary make_run_summary(const FidelityMap& map, const ControlPulse& pulse);

// pulse.csv: header t,u_x,u_z; one row per sample with the left-endpoint time
// of its piecewise-constant interval.
void write_pulse_csv(const std::filesystem::path& path, const ControlPulse& pulse);

// Reads a pulse.csv back; requires the documented header, uniform time grid
// starting at 0, and finite samples. Throws std::runtime_error with the
// offending line on schema violations.
ControlPulse read_pulse_csv(const std::filesystem::path& path);

// history.csv: header iter,objective,lambda,accepted.
void write_history_csv(const std::filesystem::path& path,
                       const std::vector<IterationRecord>& history);

// fidelity_map.csv: header xi,zeta,fidelity, zeta-major row order.
void write_fidelity_map_csv(const std::filesystem::path& path, const FidelityMap& map);

// summary.json with the stable keys max_fidelity, mean_fidelity, min_fidelity,
// I_ux, I_uz, I_dux, I_duz.
void write_summary_json(const std::filesystem::path& path, const RunSummary& summary);

// Debug dump of a moment tensor: columns a,i,j,re,im with a the Dicke m-value.
// Not a stability-guaranteed format.
void write_moments_csv(const std::filesystem::path& path, const MomentState& mom,
                       const SpinNetwork& net);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace spinpulse

#endif  // SPINPULSE_IO_HPP_
