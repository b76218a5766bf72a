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
#include "spinpulse/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinpulse {

void validate(const SpinNetwork& net) {
  if (net.n_particles < 2) {
    throw std::invalid_argument("SpinNetwork: n_particles must be >= 2, got " +
                                std::to_string(net.n_particles));
  }
  if (!std::isfinite(net.chi)) {
    throw std::invalid_argument("SpinNetwork: chi must be finite");
  }
}

void validate(const ParameterBox& box) {
  auto check = [](double delta, const char* name) {
    if (!(delta >= 0.0 && delta < 1.0)) {
      throw std::invalid_argument(std::string("ParameterBox: ") + name +
                                  " must lie in [0, 1), got " + std::to_string(delta));
    }
  };
  check(box.delta_xi, "delta_xi");
  check(box.delta_zeta, "delta_zeta");
}

ControlPulse constant_pulse(double ux, double uz, double dt, Eigen::Index steps) {
  ControlPulse pulse;
  pulse.ux = Eigen::VectorXd::Constant(steps, ux);
  pulse.uz = Eigen::VectorXd::Constant(steps, uz);
  pulse.dt = dt;
  return pulse;
}

void validate(const ControlPulse& pulse) {
  if (pulse.ux.size() != pulse.uz.size()) {
    throw std::invalid_argument("ControlPulse: channel sample counts differ");
  }
  if (!(pulse.dt > 0.0) || !std::isfinite(pulse.dt)) {
    throw std::invalid_argument("ControlPulse: dt must be positive and finite");
  }
  if (!pulse.ux.allFinite() || !pulse.uz.allFinite()) {
    throw std::invalid_argument("ControlPulse: samples must be finite");
  }
}

AmplitudeState ground_state(const SpinNetwork& net) {
  AmplitudeState state;
  state.c = Eigen::VectorXcd::Zero(net.dim());
  state.c(net.dim() - 1) = Complex(1.0, 0.0);  // m = -S is the last index
  state.t = 0.0;
  return state;
}

double normalization_error(const AmplitudeState& state) {
  return std::abs(state.c.squaredNorm() - 1.0);
}

void require_normalized(const AmplitudeState& state, double tol) {
  if (normalization_error(state) > tol) {
    throw std::invalid_argument("AmplitudeState: probability normalization violated");
  }
}

}  // namespace spinpulse
