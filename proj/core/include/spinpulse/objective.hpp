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
#ifndef SPINPULSE_OBJECTIVE_HPP_
#define SPINPULSE_OBJECTIVE_HPP_

#include <vector>

#include <Eigen/Core>

#include "spinpulse/moments.hpp"
#include "spinpulse/target.hpp"

namespace spinpulse {

// Order-0 moment target factor: a magnitude t_a maps to m_{a,0,0} = factor*t_a
// (4 in the unnormalized convention, 2 in the orthonormal one).
double target_weight(LegendreConvention conv);

// Flat moment indices entering the design residual: every (a, i, j) except the
// rows of a_max. Ascending flat order.
std::vector<Eigen::Index> residual_indices(const MomentState& dims, const TargetProfile& target);

// Realified residual [Re; Im] over residual_indices, with factor*t_a
// subtracted from the real part of the order-(0,0) entries on the support.
Eigen::VectorXd residual(const MomentState& momT, const TargetProfile& target,
                         LegendreConvention conv = LegendreConvention::kUnnormalized);

// Least-squares surrogate of the design objective: squared norm of the
// residual. Zero exactly when every targeted moment matches, so minimizers at
// zero residual coincide with those of the nonsmooth sum-of-moduli form.
double objective(const MomentState& momT, const TargetProfile& target,
                 LegendreConvention conv = LegendreConvention::kUnnormalized);

}  // namespace spinpulse

#endif  // SPINPULSE_OBJECTIVE_HPP_
