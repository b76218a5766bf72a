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
#include "spinpulse/design.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "spinpulse/generators.hpp"
#include "spinpulse/objective.hpp"
#include "spinpulse/sensitivity.hpp"

namespace spinpulse {

DesignResult design_pulse(const DesignProblem& problem, const SolverSettings& settings,
                          const ControlPulse& u_init) {
  validate(problem.net);
  validate(problem.box);
  require_normalized(problem.psi0);
  require_feasible(u_init, problem.restrictions);
  if (problem.order_xi < 0 || problem.order_zeta < 0) {
    throw std::invalid_argument("design_pulse: truncation orders must be >= 0");
  }

  const GeneratorSet gen = build_generators(problem.net);
  const MomentPropagator prop(gen, problem.box, problem.order_xi, problem.order_zeta,
                              problem.convention);
  const MomentState m0 =
      initial_moments(problem.psi0, problem.order_xi, problem.order_zeta, problem.convention);
  const Eigen::Index kt = u_init.steps();

  QpSettings qp_settings;
  qp_settings.max_iters = settings.qp_max_iters;
  qp_settings.step_limit = settings.step_max;
  QpWarmStart warm;

  DesignResult result;
  result.pulse = u_init;

  MomentPropagator::ForwardCache cache, trial_cache;
  MomentState mom = prop.propagate_cached(m0, result.pulse, cache);
  double j_current = objective(mom, problem.target, problem.convention);
  double lambda = settings.lambda_init;
  result.history.push_back({0, j_current, lambda, true});

  for (int iter = 1; iter <= settings.max_outer_iters; ++iter) {
    const Eigen::MatrixXd g = sensitivity_from_cache(prop, cache, result.pulse);

    bool accepted = false;
    double j_drop = 0.0;
    while (!accepted) {
      const QpResult step = qp_step(mom, g, problem.target, result.pulse,
                                    problem.restrictions, lambda, problem.convention,
                                    qp_settings, &warm);

      ControlPulse trial = result.pulse;
      trial.ux += step.x.head(kt);
      trial.uz += step.x.tail(kt);
      // The subproblem keeps u + du inside the box to solver accuracy; snap
      // exactly so feasibility cannot drift across iterations.
      trial.ux = trial.ux.cwiseMax(problem.restrictions.x.min).cwiseMin(problem.restrictions.x.max);
      trial.uz = trial.uz.cwiseMax(problem.restrictions.z.min).cwiseMin(problem.restrictions.z.max);

      const MomentState trial_mom = prop.propagate_cached(m0, trial, trial_cache);
      const double j_trial = objective(trial_mom, problem.target, problem.convention);

      if (std::isfinite(j_trial) && j_trial <= j_current) {
        result.history.push_back({iter, j_trial, lambda, true});
        j_drop = j_current - j_trial;
        j_current = j_trial;
        result.pulse = trial;
        mom = trial_mom;
        std::swap(cache, trial_cache);
        lambda = std::max(lambda * settings.lambda_decrease, settings.lambda_min);
        accepted = true;
      } else {
        result.history.push_back({iter, j_trial, lambda, false});
        lambda *= settings.lambda_increase;
        if (lambda > settings.lambda_max) {
          // Damping exhausted; report the best iterate with the flag down.
          result.converged = false;
          result.final_objective = j_current;
          result.final_moments = mom;
          return result;
        }
      }
    }

    if (j_drop < settings.objective_tol) {
      result.converged = true;
      break;
    }
  }

  result.final_objective = j_current;
  result.final_moments = mom;
  return result;
}

DesignResult design_pulse_homotopy(const DesignProblem& problem, const SolverSettings& settings,
                                   const ControlPulse& u_init, int stages) {
  if (stages < 1) {
    throw std::invalid_argument("design_pulse_homotopy: stages must be >= 1");
  }
  if (stages == 1) {
    return design_pulse(problem, settings, u_init);
  }

  ControlPulse pulse = u_init;
  DesignResult result;
  int iter_offset = 0;
  for (int stage = 1; stage <= stages; ++stage) {
    DesignProblem scaled = problem;
    const double factor = static_cast<double>(stage) / stages;
    scaled.box.delta_xi = problem.box.delta_xi * factor;
    scaled.box.delta_zeta = problem.box.delta_zeta * factor;

    SolverSettings stage_settings = settings;
    if (stage < stages) {
      stage_settings.max_outer_iters = std::max(1, settings.max_outer_iters / 2);
    }

    DesignResult stage_result = design_pulse(scaled, stage_settings, pulse);
    pulse = stage_result.pulse;

    for (IterationRecord rec : stage_result.history) {
      rec.iter += iter_offset;
      result.history.push_back(rec);
    }
    iter_offset = result.history.empty() ? 0 : result.history.back().iter;

    if (stage == stages) {
      result.pulse = stage_result.pulse;
      result.converged = stage_result.converged;
      result.final_objective = stage_result.final_objective;
      result.final_moments = stage_result.final_moments;
    }
  }
  return result;
}

}  // namespace spinpulse
