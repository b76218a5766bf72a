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
#include "spinpulse/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace spinpulse {
namespace detail {

StepPropagator::StepPropagator(const GeneratorSet& gen, const EnsembleParams& p)
    : gen_(gen), p_(p), a_(gen.dim(), gen.dim()), eig_(gen.dim()),
      phase_(gen.dim()), work_(gen.dim()) {}

void StepPropagator::apply(Eigen::VectorXcd& c, double ux, double uz, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("propagate_step: dt must be positive");
  }
  const bool same_controls = have_eig_ && ux == last_ux_ && uz == last_uz_;
  if (!same_controls) {
    a_ = (p_.xi * ux) * gen_.x;
    a_.diagonal() += gen_.d0 + (p_.zeta * uz) * gen_.dz;
    eig_.compute(a_);
    have_eig_ = true;
  }
  if (!same_controls || dt != last_dt_) {
    const auto& lam = eig_.eigenvalues();
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
      phase_(k) = std::polar(1.0, -lam(k) * dt);
    }
  }
  last_ux_ = ux;
  last_uz_ = uz;
  last_dt_ = dt;

  const auto& v = eig_.eigenvectors();
  work_.noalias() = v.transpose() * c;
  work_.array() *= phase_.array();
  c.noalias() = v * work_;
}

}  // namespace detail

AmplitudeState propagate_step(const AmplitudeState& state, const GeneratorSet& gen,
                              const EnsembleParams& p, double ux, double uz, double dt) {
  detail::StepPropagator step(gen, p);
  AmplitudeState next = state;
  step.apply(next.c, ux, uz, dt);
  next.t = state.t + dt;
  return next;
}

std::vector<AmplitudeState> propagate(const AmplitudeState& state0, const GeneratorSet& gen,
                                      const EnsembleParams& p, const ControlPulse& pulse) {
  require_normalized(state0);
  validate(pulse);

  std::vector<AmplitudeState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(pulse.steps()) + 1);
  trajectory.push_back(state0);

  detail::StepPropagator step(gen, p);
  AmplitudeState current = state0;
  for (Eigen::Index k = 0; k < pulse.steps(); ++k) {
    step.apply(current.c, pulse.ux(k), pulse.uz(k), pulse.dt);
    current.t = state0.t + pulse.dt * static_cast<double>(k + 1);
    trajectory.push_back(current);
  }
  return trajectory;
}

AmplitudeState propagate_final(const AmplitudeState& state0, const GeneratorSet& gen,
                               const EnsembleParams& p, const ControlPulse& pulse) {
  require_normalized(state0);
  validate(pulse);

  detail::StepPropagator step(gen, p);
  AmplitudeState current = state0;
  for (Eigen::Index k = 0; k < pulse.steps(); ++k) {
    step.apply(current.c, pulse.ux(k), pulse.uz(k), pulse.dt);
  }
  current.t = state0.t + pulse.horizon();
  return current;
}

}  // namespace spinpulse
