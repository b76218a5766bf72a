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
#include "spinpulse/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "spinpulse/design.hpp"
#include "spinpulse/ensemble_grid.hpp"
#include "spinpulse/generators.hpp"
#include "spinpulse/io.hpp"
#include "spinpulse/objective.hpp"
#include "spinpulse/prng.hpp"
#include "spinpulse/propagator.hpp"
#include "spinpulse/sensitivity.hpp"

namespace spinpulse {
namespace {

DesignProblem problem_from_config(const RunConfig& config) {
  const SpinNetwork net = config_network(config);
  DesignProblem problem;
  problem.net = net;
  problem.box = config_box(config);
  problem.target = build_target(config.target_kind, net);
  problem.restrictions = config_restrictions(config);
  problem.order_xi = config.moment_order_xi;
  problem.order_zeta = config.moment_order_zeta;
  problem.psi0 = ground_state(net);
  return problem;
}

void write_evaluation(const RunConfig& config, const DesignProblem& problem,
                      const GeneratorSet& gen, const ControlPulse& pulse,
                      const std::filesystem::path& out_dir) {
  const SampleGrid grid = uniform_grid(problem.box, config.eval_grid_nx, config.eval_grid_nz);
  const FidelityMap map = fidelity_map(pulse, problem.net, gen, grid, problem.target,
                                       problem.psi0);
  write_fidelity_map_csv(out_dir / "fidelity_map.csv", map);
  write_summary_json(out_dir / "summary.json", make_run_summary(map, pulse));
}

ControlPulse bounded_random_pulse(SplitMix64& rng, double lo, double hi, double dt,
                                  Eigen::Index steps) {
  ControlPulse pulse;
  pulse.dt = dt;
  pulse.ux.resize(steps);
  pulse.uz.resize(steps);
  for (Eigen::Index k = 0; k < steps; ++k) {
    pulse.ux(k) = rng.uniform(lo, hi);
    pulse.uz(k) = rng.uniform(lo, hi);
  }
  return pulse;
}

// Relative gap between the propagated truncated moments and the quadrature
// moments of the propagated node ensemble (2K nodes per active axis).
double duality_gap(const GeneratorSet& gen, const ParameterBox& box, int order_xi,
                   int order_zeta, const ControlPulse& pulse, const AmplitudeState& psi0) {
  const MomentPropagator prop(gen, box, order_xi, order_zeta);
  const MomentState m0 = initial_moments(psi0, order_xi, order_zeta);
  const MomentState m_prop = prop.propagate_final(m0, pulse);

  EnsembleSamples samples;
  samples.xi = gauss_legendre(order_xi > 0 ? 2 * order_xi : 1);
  samples.zeta = gauss_legendre(order_zeta > 0 ? 2 * order_zeta : 1);
  const Eigen::Index nx = samples.xi.nodes.size();
  const Eigen::Index nz = samples.zeta.nodes.size();
  samples.states.resize(psi0.c.size(), nx * nz);
  for (Eigen::Index q = 0; q < nz; ++q) {
    for (Eigen::Index p = 0; p < nx; ++p) {
      const EnsembleParams params{1.0 + box.delta_xi * samples.xi.nodes(p),
                                  1.0 + box.delta_zeta * samples.zeta.nodes(q)};
      samples.states.col(p + nx * q) = propagate_final(psi0, gen, params, pulse).c;
    }
  }
  samples.t = psi0.t + pulse.horizon();
  const MomentState m_quad = moments_from_ensemble(samples, order_xi, order_zeta);
  return (m_prop.m - m_quad.m).norm() / m_quad.m.norm();
}

// Central-difference check of the sensitivity map on a small instance.
double sensitivity_fd_error(double dt) {
  const SpinNetwork net{2, 1.0};
  const GeneratorSet gen = build_generators(net);
  const ParameterBox box{0.2, 0.0};
  const int order = 3;
  const Eigen::Index steps = 10;

  SplitMix64 rng(0x5eed5eedULL);
  const ControlPulse pulse = bounded_random_pulse(rng, 0.0, 5.0, dt, steps);
  const MomentPropagator prop(gen, box, order, 0);
  const MomentState m0 = initial_moments(ground_state(net), order, 0);
  const Eigen::MatrixXd g = sensitivity(prop, m0, pulse);

  const double h = 1e-5;
  Eigen::MatrixXd g_fd(g.rows(), g.cols());
  const Eigen::Index n_m = prop.moment_dim();
  for (int ch = 0; ch < 2; ++ch) {
    for (Eigen::Index k = 0; k < steps; ++k) {
      ControlPulse up = pulse, down = pulse;
      (ch == 0 ? up.ux(k) : up.uz(k)) += h;
      (ch == 0 ? down.ux(k) : down.uz(k)) -= h;
      const Eigen::VectorXcd diff =
          (prop.propagate_final(m0, up).m - prop.propagate_final(m0, down).m) / (2.0 * h);
      g_fd.col(ch * steps + k).head(n_m) = diff.real();
      g_fd.col(ch * steps + k).tail(n_m) = diff.imag();
    }
  }
  return (g - g_fd).norm() / g_fd.norm();
}

}  // namespace

int cmd_design(const RunConfig& config, const std::filesystem::path& out_dir) {
  const DesignProblem problem = problem_from_config(config);
  const GeneratorSet gen = build_generators(problem.net);
  const SolverSettings settings = config_solver(config);
  const ControlPulse u_init = config_initial_pulse(config);

  const DesignResult result =
      design_pulse_homotopy(problem, settings, u_init, config.homotopy_stages);

  write_pulse_csv(out_dir / "pulse.csv", result.pulse);
  write_history_csv(out_dir / "history.csv", result.history);
  write_evaluation(config, problem, gen, result.pulse, out_dir);
  return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_simulate(const RunConfig& config, const std::filesystem::path& pulse_csv,
                 const std::filesystem::path& out_dir) {
  const DesignProblem problem = problem_from_config(config);
  const GeneratorSet gen = build_generators(problem.net);

  const ControlPulse pulse = read_pulse_csv(pulse_csv);
  if (pulse.steps() != config_steps(config)) {
    throw std::runtime_error(pulse_csv.string() + ": pulse has " +
                             std::to_string(pulse.steps()) + " samples but the config grid has " +
                             std::to_string(config_steps(config)));
  }
  if (std::abs(pulse.dt - config.dt) > 1e-9 * std::max(1.0, config.dt)) {
    throw std::runtime_error(pulse_csv.string() + ": pulse dt " + format_g17(pulse.dt) +
                             " does not match config dt " + format_g17(config.dt));
  }

  write_evaluation(config, problem, gen, pulse, out_dir);
  return kExitOk;
}

VerifyReport run_verify(const RunConfig& config) {
  VerifyReport report;
  const SpinNetwork net = config_network(config);
  const GeneratorSet gen = build_generators(net);
  const ParameterBox box = config_box(config);
  const AmplitudeState psi0 = ground_state(net);
  SplitMix64 rng(0x7e57ab1e5ULL);

  auto add = [&report](const std::string& name, double measured, double tolerance) {
    report.checks.push_back({name, measured <= tolerance, measured, tolerance});
  };

  // Unitarity over the full horizon under an arbitrary in-band pulse at a box
  // corner.
  {
    const ControlPulse pulse =
        bounded_random_pulse(rng, config.u_min, config.u_max, config.dt, config_steps(config));
    const EnsembleParams corner{1.0 + box.delta_xi, 1.0 - box.delta_zeta};
    const AmplitudeState final_state = propagate_final(psi0, gen, corner, pulse);
    add("unitarity_norm_drift", normalization_error(final_state), 1e-9);
  }

  // Legendre orthogonality under the (K+1)-point rule, K = 14.
  {
    const int order = 14;
    const QuadratureRule rule = gauss_legendre(order + 1);
    Eigen::MatrixXd basis(rule.nodes.size(), order + 1);
    for (Eigen::Index p = 0; p < rule.nodes.size(); ++p) {
      basis.row(p) = legendre_eval(order, rule.nodes(p)).transpose();
    }
    double worst = 0.0;
    for (int n = 0; n <= order; ++n) {
      for (int m = 0; m <= order; ++m) {
        const double integral =
            (basis.col(n).array() * basis.col(m).array() * rule.weights.array()).sum();
        const double exact = n == m ? 2.0 / (2.0 * n + 1.0) : 0.0;
        worst = std::max(worst, std::abs(integral - exact));
      }
    }
    add("legendre_orthogonality", worst, 1e-13);
  }

  // Multiplication coupling: moments of x*L_p match R times the moments of
  // L_p for p < K.
  {
    const int order = 14;
    const Eigen::MatrixXd r = jacobi_coupling(order);
    const QuadratureRule rule = gauss_legendre(2 * order);
    double worst = 0.0;
    for (int p = 0; p < order; ++p) {
      Eigen::VectorXd f_mom = Eigen::VectorXd::Zero(order + 1);
      Eigen::VectorXd xf_mom = Eigen::VectorXd::Zero(order + 1);
      for (Eigen::Index node = 0; node < rule.nodes.size(); ++node) {
        const Eigen::VectorXd basis = legendre_eval(order, rule.nodes(node));
        f_mom += rule.weights(node) * basis(p) * basis;
        xf_mom += rule.weights(node) * rule.nodes(node) * basis(p) * basis;
      }
      worst = std::max(worst, (xf_mom - r * f_mom).lpNorm<Eigen::Infinity>());
    }
    add("jacobi_coupling_identity", worst, 1e-13);
  }

  // Moment/ensemble duality: exact reduction at delta = 0, and a truncation
  // sweep on the configured box when an axis is active (T = 1, |u| <= 5).
  {
    const Eigen::Index steps = static_cast<Eigen::Index>(std::llround(1.0 / config.dt));
    const ControlPulse pulse = bounded_random_pulse(
        rng, std::max(config.u_min, 0.0), std::min(config.u_max, 5.0), config.dt, steps);
    add("duality_gap_delta0", duality_gap(gen, ParameterBox{0.0, 0.0}, 0, 0, pulse, psi0),
        1e-9);
    if (box.delta_xi > 0.0 || box.delta_zeta > 0.0) {
      auto gap_at = [&](int order) {
        const int kx = box.delta_xi > 0.0 ? order : 0;
        const int kz = box.delta_zeta > 0.0 ? order : 0;
        return duality_gap(gen, box, kx, kz, pulse, psi0);
      };
      const double g4 = gap_at(4), g8 = gap_at(8), g14 = gap_at(14);
      add("duality_gap_order14", g14, 1e-6);
      add("duality_order_decay", std::max(g8 / g4, g14 / g8), 1.0);
    }
  }

  // Exact step derivatives against central finite differences.
  add("sensitivity_vs_fd", sensitivity_fd_error(config.dt), 1e-4);

  report.all_pass = true;
  for (const VerifyCheck& check : report.checks) {
    report.all_pass = report.all_pass && check.pass;
  }
  return report;
}

int cmd_verify(const RunConfig& config, const std::filesystem::path& out_dir) {
  const VerifyReport report = run_verify(config);

  std::ostringstream json;
  json << "{\n  \"all_pass\": " << (report.all_pass ? "true" : "false") << ",\n";
  json << "  \"checks\": [\n";
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const VerifyCheck& check = report.checks[i];
    json << "    {\"name\": \"" << check.name << "\", \"pass\": "
         << (check.pass ? "true" : "false") << ", \"measured\": " << format_g17(check.measured)
         << ", \"tolerance\": " << format_g17(check.tolerance) << "}"
         << (i + 1 < report.checks.size() ? "," : "") << "\n";
  }
  json << "  ]\n}\n";
  write_text_file(out_dir / "verify_report.json", json.str());

  for (const VerifyCheck& check : report.checks) {
    std::printf("[%s] %-26s measured=%.3e tolerance=%.3e\n", check.pass ? " ok " : "FAIL",
                check.name.c_str(), check.measured, check.tolerance);
  }
  return report.all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace spinpulse
