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
#ifndef SPINPULSE_DESIGN_HPP_
#define SPINPULSE_DESIGN_HPP_

#include <limits>
#include <vector>

#include "spinpulse/moments.hpp"
#include "spinpulse/qp.hpp"
#include "spinpulse/target.hpp"
#include "spinpulse/types.hpp"

namespace spinpulse {

struct SolverSettings {
  int max_outer_iters = 200;
  double objective_tol = 1e-8;
  double lambda_init = 1.0;
  double lambda_increase = 10.0;  // on rejected steps
  double lambda_decrease = 0.5;   // on accepted steps
  double lambda_min = 1e-7;  // floor keeps the step subproblem well scaled
  double lambda_max = 1e12;
  // Per-iteration trust-region cap on |du|; keeps the iterate path close to
  // the continuous Gauss-Newton flow. Infinity disables it.
  double step_max = std::numeric_limits<double>::infinity();
  int qp_max_iters = 20000;
  bool deterministic = true;  // no randomized components anywhere
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double lambda = 0.0;
  bool accepted = false;
};

struct DesignResult {
  ControlPulse pulse;  // best-seen iterate
  std::vector<IterationRecord> history;
  bool converged = false;
  double final_objective = 0.0;
  MomentState final_moments;
};

// Design instance: network, uncertainty box, truncation orders, target and
// signal restrictions, initial ensemble state.
struct DesignProblem {
  SpinNetwork net;
  ParameterBox box;
  TargetProfile target;
  SignalRestrictions restrictions;
  int order_xi = 14;
  int order_zeta = 0;
  AmplitudeState psi0;
  LegendreConvention convention = LegendreConvention::kUnnormalized;
};

// Damped Gauss-Newton loop on the truncated moment dynamics: propagate,
// linearize, solve the box/rate-constrained step subproblem, accept on
// objective decrease (halving the damping) or reject (tenfold increase).
// Stops when an accepted step improves the objective by less than
// objective_tol or on the iteration cap; non-convergence returns the best
// iterate with converged = false, never throws for that reason. u_init must
// satisfy the restrictions.
DesignResult design_pulse(const DesignProblem& problem, const SolverSettings& settings,
                          const ControlPulse& u_init);

// Continuation in the uncertainty half-widths: solves the design over boxes
// scaled by s/stages for s = 1..stages, seeding each stage with the previous
// pulse. Small boxes keep the ensemble's parameter sensitivity inside the
// truncated moment bandwidth, so the homotopy tracks the genuinely robust
// solution branch instead of node-fitting artifacts that a direct large-box
// solve can fall into. Intermediate stages run at half the iteration budget;
// the final stage solves exactly the requested problem. stages = 1 reduces to
// design_pulse. Histories are concatenated with continuing iteration numbers.
DesignResult design_pulse_homotopy(const DesignProblem& problem, const SolverSettings& settings,
                                   const ControlPulse& u_init, int stages);

}  // namespace spinpulse

#endif  // SPINPULSE_DESIGN_HPP_
