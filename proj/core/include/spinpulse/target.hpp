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
#ifndef SPINPULSE_TARGET_HPP_
#define SPINPULSE_TARGET_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "spinpulse/types.hpp"

namespace spinpulse {

enum class TargetKind { W, HEDS, GHZ };

TargetKind parse_target_kind(const std::string& name);  // throws on unknown name
std::string to_string(TargetKind kind);

// Desired final amplitude magnitudes t_a = |<psi_f|S,a>| per Dicke index
// (vector ordered m = S..-S like AmplitudeState), with the support set and
// its largest element. The magnitudes satisfy sum_a t_a^2 = 1.
struct TargetProfile {
  TargetKind kind = TargetKind::W;
  Eigen::VectorXd amplitude;
  std::vector<int> support;  // indices with t_a > 0, ascending index order
  int a_max_index = 0;       // index of sup(support) in m-value, i.e. smallest index

  bool in_support(int index) const;
};

// W: t = 1 at a = -(S-1); HEDS: t = 1 at a = 0 (N even) or a = -1/2 (N odd);
// GHZ: t = 1/sqrt(2) at a = +-S.
TargetProfile build_target(TargetKind kind, const SpinNetwork& net);

}  // namespace spinpulse

#endif  // SPINPULSE_TARGET_HPP_
