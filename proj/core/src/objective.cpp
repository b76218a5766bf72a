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
#include "spinpulse/objective.hpp"

#include <stdexcept>

namespace spinpulse {

double target_weight(LegendreConvention conv) {
  return conv == LegendreConvention::kUnnormalized ? 4.0 : 2.0;
}

std::vector<Eigen::Index> residual_indices(const MomentState& dims, const TargetProfile& target) {
  if (dims.dim_a != target.amplitude.size()) {
    throw std::invalid_argument("residual_indices: target dimension mismatch");
  }
  std::vector<Eigen::Index> sel;
  sel.reserve(static_cast<std::size_t>(dims.size()));
  const int nx = dims.order_xi + 1;
  const int nz = dims.order_zeta + 1;
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      for (int a = 0; a < dims.dim_a; ++a) {
        if (a == target.a_max_index) continue;
        sel.push_back(dims.flat(a, i, j));
      }
    }
  }
  return sel;
}

Eigen::VectorXd residual(const MomentState& momT, const TargetProfile& target,
                         LegendreConvention conv) {
  const std::vector<Eigen::Index> sel = residual_indices(momT, target);
  const Eigen::Index ns = static_cast<Eigen::Index>(sel.size());
  const double weight = target_weight(conv);

  Eigen::VectorXd r(2 * ns);
  for (Eigen::Index k = 0; k < ns; ++k) {
    const Complex value = momT.m(sel[k]);
    r(k) = value.real();
    r(ns + k) = value.imag();
  }
  // Subtract the order-(0,0) support targets (real positive by convention).
  for (int a : target.support) {
    if (a == target.a_max_index) continue;
    const Eigen::Index flat = momT.flat(a, 0, 0);
    for (Eigen::Index k = 0; k < ns; ++k) {
      if (sel[k] == flat) {
        r(k) -= weight * target.amplitude(a);
        break;
      }
    }
  }
  return r;
}

double objective(const MomentState& momT, const TargetProfile& target, LegendreConvention conv) {
  return residual(momT, target, conv).squaredNorm();
}

}  // namespace spinpulse
