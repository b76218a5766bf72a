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
#ifndef SPINPULSE_SENSITIVITY_HPP_
#define SPINPULSE_SENSITIVITY_HPP_

#include <Eigen/Core>

#include "spinpulse/moments.hpp"

namespace spinpulse {

// Exact first-order map G from control-sample perturbations to the realified
// final moment state: columns are ordered [u_x samples | u_z samples], rows
// [Re(m flat) | Im(m flat)]. Each column uses the exact directional
// derivative of the step exponential (divided-difference form in the step's
// eigenbasis), so agreement with central finite differences is limited only
// by the differencing error.
Eigen::MatrixXd sensitivity(const MomentPropagator& prop, const MomentState& m0,
                            const ControlPulse& pulse);

// Same map assembled from an existing forward pass.
Eigen::MatrixXd sensitivity_from_cache(const MomentPropagator& prop,
                                       const MomentPropagator::ForwardCache& cache,
                                       const ControlPulse& pulse);

}  // namespace spinpulse

#endif  // SPINPULSE_SENSITIVITY_HPP_
