#include <doctest.h>

#include <cmath>

#include "spinpulse/design.hpp"
#include "spinpulse/ensemble_grid.hpp"
#include "spinpulse/generators.hpp"
#include "spinpulse/objective.hpp"
#include "spinpulse/propagator.hpp"

using namespace spinpulse;

namespace {

DesignProblem small_problem(TargetKind kind, double delta_xi, int order_xi) {
  DesignProblem problem;
  problem.net = {2, 1.0};
  problem.box = {delta_xi, 0.0};
  problem.target = build_target(kind, problem.net);
  problem.restrictions.x = {0.0, 40.0};
  problem.restrictions.z = {0.0, 40.0};
  problem.order_xi = order_xi;
  problem.order_zeta = 0;
  problem.psi0 = ground_state(problem.net);
  return problem;
}

}  // namespace

TEST_CASE("design_pulse: zero-residual start is a fixpoint") {
  // With u_x = 0 the ladder coupling is off, so the ground-state ensemble
  // stays put and every non-support moment vanishes identically. The custom
  // target supported on m = -S therefore has zero residual at u_init.
  DesignProblem problem = small_problem(TargetKind::W, 0.0, 0);
  problem.target.kind = TargetKind::W;
  problem.target.amplitude = Eigen::VectorXd::Zero(3);
  problem.target.amplitude(2) = 1.0;  // m = -S
  problem.target.support = {2};
  problem.target.a_max_index = 2;

  const ControlPulse u_init = constant_pulse(0.0, 3.0, 0.01, 100);
  SolverSettings settings;
  settings.max_outer_iters = 10;

  const DesignResult result = design_pulse(problem, settings, u_init);
  CHECK(result.converged);
  CHECK(result.final_objective == doctest::Approx(0.0));
  CHECK((result.pulse.ux - u_init.ux).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK((result.pulse.uz - u_init.uz).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("design_pulse: drives a small W design and links objective to fidelity") {
  DesignProblem problem = small_problem(TargetKind::W, 0.1, 4);
  const ControlPulse u_init = constant_pulse(3.0, 3.0, 0.01, 300);  // T = 3
  SolverSettings settings;
  settings.max_outer_iters = 60;

  const DesignResult result = design_pulse(problem, settings, u_init);
  const double j0 = result.history.front().objective;
  CHECK(result.final_objective < 1e-3 * j0);

  // accepted-step monotonicity
  double last = std::numeric_limits<double>::infinity();
  for (const IterationRecord& rec : result.history) {
    if (!rec.accepted) continue;
    CHECK(rec.objective <= last + 1e-15);
    last = rec.objective;
  }

  // the returned pulse respects the restrictions
  CHECK_NOTHROW(require_feasible(result.pulse, problem.restrictions, 1e-10));

  // ensemble fidelity improved markedly over the initial pulse
  const GeneratorSet gen = build_generators(problem.net);
  const SampleGrid grid = uniform_grid(problem.box, 11, 1);
  const FidelityMap map =
      fidelity_map(result.pulse, problem.net, gen, grid, problem.target, problem.psi0);
  const MapSummary summary = summarize(map);
  CHECK(summary.min > 0.99);
}

TEST_CASE("design_pulse: collapsed box GHZ run certifies the a_max closure") {
  DesignProblem problem = small_problem(TargetKind::GHZ, 0.0, 0);
  const ControlPulse u_init = constant_pulse(3.0, 3.0, 0.01, 300);
  SolverSettings settings;
  settings.max_outer_iters = 80;

  const DesignResult result = design_pulse(problem, settings, u_init);
  REQUIRE(result.final_objective < 1e-8);

  // Zero residual plus norm conservation forces the excluded a_max level to
  // its target magnitude.
  const GeneratorSet gen = build_generators(problem.net);
  const AmplitudeState final_state =
      propagate_final(problem.psi0, gen, {1.0, 1.0}, result.pulse);
  const double a_max_mag = std::abs(final_state.c(problem.target.a_max_index));
  CHECK(a_max_mag == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(2e-4));
  CHECK(fidelity(final_state, problem.target) > 0.99999);
}

TEST_CASE("design_pulse: iteration cap returns the best iterate with the flag down") {
  DesignProblem problem = small_problem(TargetKind::W, 0.1, 3);
  const ControlPulse u_init = constant_pulse(3.0, 3.0, 0.01, 100);
  SolverSettings settings;
  settings.max_outer_iters = 2;
  settings.objective_tol = 0.0;

  const DesignResult result = design_pulse(problem, settings, u_init);
  CHECK_FALSE(result.converged);
  CHECK(result.history.size() >= 2);
  CHECK(result.final_objective <= result.history.front().objective);
}

TEST_CASE("design_pulse: infeasible initial pulse is rejected") {
  DesignProblem problem = small_problem(TargetKind::W, 0.1, 3);
  const ControlPulse bad = constant_pulse(50.0, 3.0, 0.01, 50);
  CHECK_THROWS_AS(design_pulse(problem, {}, bad), std::invalid_argument);
}
