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
#ifndef SPINPULSE_ENSEMBLE_GRID_HPP_
#define SPINPULSE_ENSEMBLE_GRID_HPP_

#include <Eigen/Core>

#include "spinpulse/generators.hpp"
#include "spinpulse/target.hpp"
#include "spinpulse/types.hpp"

namespace spinpulse {

// Evaluation nodes over the parameter box; a collapsed (delta = 0) axis holds
// the single node 1.
struct SampleGrid {
  enum class Kind { kUniform, kGaussLegendre };
  Eigen::VectorXd xi_nodes;
  Eigen::VectorXd zeta_nodes;
  Kind kind = Kind::kUniform;
};

SampleGrid uniform_grid(const ParameterBox& box, int n_xi, int n_zeta);
SampleGrid gauss_grid(const ParameterBox& box, int n_xi, int n_zeta);

// Fidelity values F(xi_i, zeta_j) of one pulse over a grid; values(i, j)
// pairs with (xi_nodes(i), zeta_nodes(j)).
struct FidelityMap {
  SampleGrid grid;
  Eigen::MatrixXd values;
};

// F = 1 - sum_{a in support} (|c_a| - t_a)^2; phase-insensitive, <= 1, equal
// to 1 iff the achieved magnitudes match the target on its support. Can be
// negative for very poor pulses and is reported as-is.
double fidelity(const AmplitudeState& final_state, const TargetProfile& target);

// Propagates psi0 under the pulse for every grid cell and records the final
// fidelity. Propagation errors are rethrown with the offending cell appended.
FidelityMap fidelity_map(const ControlPulse& pulse, const SpinNetwork& net,
                         const GeneratorSet& gen, const SampleGrid& grid,
                         const TargetProfile& target, const AmplitudeState& psi0);

// Time integral of |f| under the piecewise-constant convention:
// sum_k |f_k| dt. Throws std::invalid_argument if dt <= 0.
double effort_index(const Eigen::VectorXd& samples, double dt);

// Forward-difference slew samples (u_{k+1} - u_k)/dt; effort_index of these
// equals the total variation of the pulse.
Eigen::VectorXd slew_samples(const Eigen::VectorXd& samples, double dt);

struct MapSummary {
  double max = 0.0;
  double mean = 0.0;
  double min = 0.0;
};

// Exact max/mean/min over the grid values; the mean uses sequential summation
// in storage order for reproducibility.
MapSummary summarize(const FidelityMap& map);

}  // namespace spinpulse

#endif  // SPINPULSE_ENSEMBLE_GRID_HPP_
