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
#ifndef SPINPULSE_PROPAGATOR_HPP_
#define SPINPULSE_PROPAGATOR_HPP_

#include <vector>

#include <Eigen/Dense>

#include "spinpulse/generators.hpp"
#include "spinpulse/types.hpp"

namespace spinpulse {

// One piecewise-constant step c(t+dt) = exp(-i A dt) c(t) through the
// eigendecomposition of the real symmetric A; norm-preserving up to roundoff.
// Throws std::invalid_argument if dt <= 0.
AmplitudeState propagate_step(const AmplitudeState& state, const GeneratorSet& gen,
                              const EnsembleParams& p, double ux, double uz, double dt);

// Chains propagate_step over the pulse grid. Returns steps()+1 states,
// trajectory.front() == state0. state0 must be normalized to 1e-9.
std::vector<AmplitudeState> propagate(const AmplitudeState& state0, const GeneratorSet& gen,
                                      const EnsembleParams& p, const ControlPulse& pulse);

// Final state only; avoids storing the trajectory.
AmplitudeState propagate_final(const AmplitudeState& state0, const GeneratorSet& gen,
                               const EnsembleParams& p, const ControlPulse& pulse);

namespace detail {

// Reusable step engine: applies exp(-i A(ux, uz) dt) in place, reusing the
// eigendecomposition when consecutive control samples repeat.
class StepPropagator {
 public:
  StepPropagator(const GeneratorSet& gen, const EnsembleParams& p);

  void apply(Eigen::VectorXcd& c, double ux, double uz, double dt);

 private:
  const GeneratorSet& gen_;
  EnsembleParams p_;
  Eigen::MatrixXd a_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_;
  Eigen::VectorXcd phase_, work_;
  double last_ux_ = 0.0, last_uz_ = 0.0, last_dt_ = 0.0;
  bool have_eig_ = false;
};

}  // namespace detail
}  // namespace spinpulse

#endif  // SPINPULSE_PROPAGATOR_HPP_
