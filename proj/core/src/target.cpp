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
#include "spinpulse/target.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinpulse {

TargetKind parse_target_kind(const std::string& name) {
  if (name == "W") return TargetKind::W;
  if (name == "HEDS") return TargetKind::HEDS;
  if (name == "GHZ") return TargetKind::GHZ;
  throw std::invalid_argument("unknown target_kind '" + name + "' (expected W, HEDS or GHZ)");
}

std::string to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::W: return "W";
    case TargetKind::HEDS: return "HEDS";
    case TargetKind::GHZ: return "GHZ";
  }
  throw std::logic_error("to_string(TargetKind): invalid enum value");
}

bool TargetProfile::in_support(int index) const {
  return std::find(support.begin(), support.end(), index) != support.end();
}

namespace {

// Vector index of the Dicke level with m-value a; amplitude vectors run from
// m = S down to m = -S.
int index_of_m(const SpinNetwork& net, double a) {
  const double idx = net.spin() - a;
  const int rounded = static_cast<int>(std::lround(idx));
  if (std::abs(idx - rounded) > 1e-9 || rounded < 0 || rounded >= net.dim()) {
    throw std::logic_error("target level outside the Dicke ladder");
  }
  return rounded;
}

}  // namespace

TargetProfile build_target(TargetKind kind, const SpinNetwork& net) {
  validate(net);
  TargetProfile target;
  target.kind = kind;
  target.amplitude = Eigen::VectorXd::Zero(net.dim());

  switch (kind) {
    case TargetKind::W: {
      const int idx = index_of_m(net, -(net.spin() - 1.0));
      target.amplitude(idx) = 1.0;
      target.support = {idx};
      break;
    }
    case TargetKind::HEDS: {
      const double a = (net.n_particles % 2 == 0) ? 0.0 : -0.5;
      const int idx = index_of_m(net, a);
      target.amplitude(idx) = 1.0;
      target.support = {idx};
      break;
    }
    case TargetKind::GHZ: {
      const int top = index_of_m(net, net.spin());
      const int bottom = index_of_m(net, -net.spin());
      target.amplitude(top) = 1.0 / std::numbers::sqrt2;
      target.amplitude(bottom) = 1.0 / std::numbers::sqrt2;
      target.support = {top, bottom};
      break;
    }
  }
  // sup over m-values = smallest vector index
  target.a_max_index = *std::min_element(target.support.begin(), target.support.end());
  return target;
}

}  // namespace spinpulse
