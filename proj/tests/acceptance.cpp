// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is the number of
// failed criteria. Run with --criterion <k> (repeatable) to select a subset.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinpulse/commands.hpp"
#include "spinpulse/config.hpp"
#include "spinpulse/design.hpp"
#include "spinpulse/ensemble_grid.hpp"
#include "spinpulse/generators.hpp"
#include "spinpulse/io.hpp"
#include "spinpulse/legendre.hpp"
#include "spinpulse/moments.hpp"
#include "spinpulse/objective.hpp"
#include "spinpulse/prng.hpp"
#include "spinpulse/propagator.hpp"
#include "spinpulse/qp.hpp"
#include "spinpulse/sensitivity.hpp"

#ifndef SPINPULSE_CONFIG_DIR
#define SPINPULSE_CONFIG_DIR "configs"
#endif

using namespace spinpulse;

namespace {

struct DesignRun {
  RunConfig config;
  DesignResult result;
  FidelityMap map;
  RunSummary summary;
  std::filesystem::path out_dir;
};

std::filesystem::path out_root() {
  return std::filesystem::path("acceptance_out");
}

// Designs are cached per config name so criteria share runs; criterion 10
// performs its own second runs.
std::map<std::string, DesignRun>& run_cache() {
  static std::map<std::string, DesignRun> cache;
  return cache;
}

RunConfig load_named_config(const std::string& name) {
  return load_config_file(std::filesystem::path(SPINPULSE_CONFIG_DIR) / (name + ".cfg"));
}

DesignRun execute_design(const RunConfig& config, const std::filesystem::path& out_dir) {
  DesignRun run;
  run.config = config;
  run.out_dir = out_dir;

  DesignProblem problem;
  problem.net = config_network(config);
  problem.box = config_box(config);
  problem.target = build_target(config.target_kind, problem.net);
  problem.restrictions = config_restrictions(config);
  problem.order_xi = config.moment_order_xi;
  problem.order_zeta = config.moment_order_zeta;
  problem.psi0 = ground_state(problem.net);

  run.result = design_pulse_homotopy(problem, config_solver(config), config_initial_pulse(config),
                                     config.homotopy_stages);

  const GeneratorSet gen = build_generators(problem.net);
  const SampleGrid grid = uniform_grid(problem.box, config.eval_grid_nx, config.eval_grid_nz);
  run.map = fidelity_map(run.result.pulse, problem.net, gen, grid, problem.target,
                         problem.psi0);
  run.summary = make_run_summary(run.map, run.result.pulse);

  write_pulse_csv(out_dir / "pulse.csv", run.result.pulse);
  write_history_csv(out_dir / "history.csv", run.result.history);
  write_fidelity_map_csv(out_dir / "fidelity_map.csv", run.map);
  write_summary_json(out_dir / "summary.json", run.summary);
  return run;
}

const DesignRun& cached_design(const std::string& name) {
  auto it = run_cache().find(name);
  if (it == run_cache().end()) {
    const RunConfig config = load_named_config(name);
    std::printf("  ... designing %s (N=%d, %s)\n", name.c_str(), config.n_particles,
                to_string(config.target_kind).c_str());
    std::fflush(stdout);
    it = run_cache().emplace(name, execute_design(config, out_root() / name / "run1")).first;
  }
  return it->second;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Criterion {
  bool pass = true;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1-3: single-parameter reproductions

Criterion criterion_single(const std::string& config_name, double threshold,
                           double min_fraction) {
  const DesignRun& run = cached_design(config_name);
  const Eigen::MatrixXd& values = run.map.values;
  const Eigen::Index total = values.size();
  Eigen::Index above = 0;
  for (Eigen::Index i = 0; i < total; ++i) {
    if (values(i) > threshold) ++above;
  }
  const double fraction = static_cast<double>(above) / static_cast<double>(total);
  const MapSummary s = summarize(run.map);

  Criterion c;
  c.pass = fraction >= min_fraction;
  std::ostringstream detail;
  detail << "min=" << s.min << " mean=" << s.mean << " nodes>" << threshold << ": " << above
         << "/" << total << " (need " << min_fraction * 100 << "%)";
  c.detail = detail.str();
  return c;
}

// 4: two-parameter Table-style targets

Criterion criterion_two_param() {
  struct Entry {
    const char* name;
    double mean_ref;
    double i_ux_ref, i_uz_ref, i_dux_ref, i_duz_ref;
  };
  const Entry entries[] = {
      {"w_n5_double", 0.9990, 26.6134, 27.3416, 2.4042, 0.7720},
      {"heds_n5_double", 0.9983, 28.6216, 26.2722, 3.6222, 1.5900},
      {"ghz_n5_double", 0.9808, 47.2684, 43.6936, 8.3484, 4.1795},
  };

  Criterion c;
  std::ostringstream detail;
  for (const Entry& entry : entries) {
    const DesignRun& run = cached_design(entry.name);
    const MapSummary s = summarize(run.map);
    const bool mean_ok = std::abs(s.mean - entry.mean_ref) <= 0.02;
    bool entry_ok = mean_ok;
    if (std::string(entry.name) == "ghz_n5_double") {
      entry_ok = entry_ok && s.min >= 0.85;
    }
    c.pass = c.pass && entry_ok;
    detail << entry.name << " mean=" << s.mean << " (ref " << entry.mean_ref
           << ") min=" << s.min << "; ";
    // effort indices are reported, not asserted: pulse shapes are
    // optimizer-dependent
    std::printf(
        "  [info] %s indices: I_ux=%.4f (ref %.4f) I_uz=%.4f (ref %.4f) I_dux=%.4f (ref "
        "%.4f) I_duz=%.4f (ref %.4f)\n",
        entry.name, run.summary.i_ux, entry.i_ux_ref, run.summary.i_uz, entry.i_uz_ref,
        run.summary.i_dux, entry.i_dux_ref, run.summary.i_duz, entry.i_duz_ref);
  }
  c.detail = detail.str();
  return c;
}

// 5: unitarity property over random draws

Criterion criterion_unitarity() {
  const SpinNetwork net{5, 1.0};
  const GeneratorSet gen = build_generators(net);
  SplitMix64 rng(0xacce97edULL);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    ControlPulse pulse;
    pulse.dt = 0.01;
    pulse.ux.resize(900);
    pulse.uz.resize(900);
    for (int k = 0; k < 900; ++k) {
      pulse.ux(k) = rng.uniform(0.0, 40.0);
      pulse.uz(k) = rng.uniform(0.0, 40.0);
    }
    const EnsembleParams p{rng.uniform(0.8, 1.2), rng.uniform(0.8, 1.2)};
    const AmplitudeState out = propagate_final(ground_state(net), gen, p, pulse);
    worst = std::max(worst, normalization_error(out));
  }
  Criterion c;
  c.pass = worst <= 1e-9;
  c.detail = "worst norm drift " + format_g17(worst) + " (tol 1e-9)";
  return c;
}

// 6: moment-ensemble duality oracle

double duality_gap(const GeneratorSet& gen, const ParameterBox& box, int kx, int kz,
                   const ControlPulse& pulse, const AmplitudeState& psi0) {
  const MomentPropagator prop(gen, box, kx, kz);
  const MomentState m_prop = prop.propagate_final(initial_moments(psi0, kx, kz), pulse);

  EnsembleSamples samples;
  samples.xi = gauss_legendre(kx > 0 ? 2 * kx : 1);
  samples.zeta = gauss_legendre(kz > 0 ? 2 * kz : 1);
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
  const MomentState m_quad = moments_from_ensemble(samples, kx, kz);
  return (m_prop.m - m_quad.m).norm() / m_quad.m.norm();
}

Criterion criterion_duality() {
  const SpinNetwork net{5, 1.0};
  const GeneratorSet gen = build_generators(net);
  const AmplitudeState psi0 = ground_state(net);
  SplitMix64 rng(0xd0a117ULL);
  ControlPulse pulse;
  pulse.dt = 0.01;
  pulse.ux.resize(100);
  pulse.uz.resize(100);
  for (int k = 0; k < 100; ++k) {
    pulse.ux(k) = rng.uniform(0.0, 5.0);
    pulse.uz(k) = rng.uniform(0.0, 5.0);
  }

  const ParameterBox box{0.2, 0.0};
  const double g4 = duality_gap(gen, box, 4, 0, pulse, psi0);
  const double g8 = duality_gap(gen, box, 8, 0, pulse, psi0);
  const double g14 = duality_gap(gen, box, 14, 0, pulse, psi0);
  const double g0 = duality_gap(gen, {0.0, 0.0}, 0, 0, pulse, psi0);

  Criterion c;
  c.pass = g14 <= 1e-6 && g14 < g8 && g8 < g4 && g0 <= 1e-9;
  std::ostringstream detail;
  detail << "gap(K=4)=" << g4 << " gap(8)=" << g8 << " gap(14)=" << g14
         << " (tol 1e-6, strictly decreasing), delta0 gap=" << g0 << " (tol 1e-9)";
  c.detail = detail.str();
  return c;
}

// 7: gradient oracle

Criterion criterion_gradient() {
  const SpinNetwork net{2, 1.0};
  const GeneratorSet gen = build_generators(net);
  const ParameterBox box{0.2, 0.0};
  const MomentPropagator prop(gen, box, 3, 0);
  const MomentState m0 = initial_moments(ground_state(net), 3, 0);

  SplitMix64 rng(0x9fadULL);
  ControlPulse pulse;
  pulse.dt = 0.01;
  pulse.ux.resize(10);
  pulse.uz.resize(10);
  for (int k = 0; k < 10; ++k) {
    pulse.ux(k) = rng.uniform(0.0, 5.0);
    pulse.uz(k) = rng.uniform(0.0, 5.0);
  }

  const Eigen::MatrixXd g = sensitivity(prop, m0, pulse);
  const double h = 1e-5;
  const Eigen::Index n_m = prop.moment_dim();
  Eigen::MatrixXd g_fd(2 * n_m, 20);
  for (int ch = 0; ch < 2; ++ch) {
    for (int k = 0; k < 10; ++k) {
      ControlPulse up = pulse, down = pulse;
      (ch == 0 ? up.ux(k) : up.uz(k)) += h;
      (ch == 0 ? down.ux(k) : down.uz(k)) -= h;
      const Eigen::VectorXcd diff =
          (prop.propagate_final(m0, up).m - prop.propagate_final(m0, down).m) / (2.0 * h);
      g_fd.col(ch * 10 + k).head(n_m) = diff.real();
      g_fd.col(ch * 10 + k).tail(n_m) = diff.imag();
    }
  }
  const double rel = (g - g_fd).norm() / g_fd.norm();
  Criterion c;
  c.pass = rel <= 1e-4;
  c.detail = "relative error vs central differences " + format_g17(rel) + " (tol 1e-4)";
  return c;
}

// 8: QP KKT oracle (independent dense recomputation)

Criterion criterion_qp() {
  SplitMix64 rng(0x0b5e55edULL);
  Criterion c;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index kt = 5 + static_cast<Eigen::Index>(rng.next_u64() % 10);
    const Eigen::Index n = 2 * kt;
    const Eigen::Index nr = 2 + static_cast<Eigen::Index>(rng.next_u64() % n);
    BoxRateQp qp;
    qp.G.resize(nr, n);
    for (Eigen::Index i = 0; i < nr; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) qp.G(i, j) = rng.uniform(-1, 1);
    }
    qp.r.resize(nr);
    for (Eigen::Index i = 0; i < nr; ++i) qp.r(i) = rng.uniform(-3, 3);
    qp.lambda = std::pow(10.0, rng.uniform(-5, 0));
    qp.samples = kt;
    qp.box_lower.resize(n);
    qp.box_upper.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      qp.box_lower(i) = -rng.uniform(0.05, 1.0);
      qp.box_upper(i) = rng.uniform(0.05, 1.0);
    }
    const Eigen::Index md = 2 * (kt - 1);
    qp.rate_lower.resize(md);
    qp.rate_upper.resize(md);
    for (Eigen::Index i = 0; i < md; ++i) {
      qp.rate_lower(i) = -rng.uniform(0.02, 0.4);
      qp.rate_upper(i) = rng.uniform(0.02, 0.4);
    }

    const QpResult res = solve_box_rate_qp(qp);

    // independent dense KKT residuals
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + md, n);
    a.topRows(n).setIdentity();
    Eigen::Index row = n;
    for (int ch = 0; ch < 2; ++ch) {
      for (Eigen::Index k = 0; k + 1 < kt; ++k) {
        a(row, ch * kt + k) = -1.0;
        a(row, ch * kt + k + 1) = 1.0;
        ++row;
      }
    }
    Eigen::VectorXd lower(n + md), upper(n + md);
    lower << qp.box_lower, qp.rate_lower;
    upper << qp.box_upper, qp.rate_upper;
    const Eigen::VectorXd ax = a * res.x;
    const Eigen::VectorXd grad = 2.0 * (qp.G.transpose() * (qp.G * res.x + qp.r)) +
                                 2.0 * qp.lambda * res.x + a.transpose() * res.dual;
    double stat = grad.lpNorm<Eigen::Infinity>();
    double primal = 0.0, comp = 0.0;
    for (Eigen::Index i = 0; i < ax.size(); ++i) {
      primal = std::max({primal, lower(i) - ax(i), ax(i) - upper(i)});
      if (res.dual(i) > 0.0) comp = std::max(comp, res.dual(i) * std::abs(upper(i) - ax(i)));
      if (res.dual(i) < 0.0) comp = std::max(comp, -res.dual(i) * std::abs(ax(i) - lower(i)));
    }
    worst = std::max({worst, stat, primal, comp});
  }
  c.pass = worst <= 1e-8;
  c.detail = "worst stationarity/feasibility/complementarity residual " + format_g17(worst) +
             " (tol 1e-8)";
  return c;
}

// 9: Legendre/Jacobi exactness

Criterion criterion_legendre() {
  const int order = 14;
  double worst = 0.0;

  const QuadratureRule rule = gauss_legendre(order + 1);
  Eigen::MatrixXd basis(rule.nodes.size(), order + 1);
  for (Eigen::Index p = 0; p < rule.nodes.size(); ++p) {
    basis.row(p) = legendre_eval(order, rule.nodes(p)).transpose();
  }
  for (int n = 0; n <= order; ++n) {
    for (int m = 0; m <= order; ++m) {
      const double integral =
          (basis.col(n).array() * basis.col(m).array() * rule.weights.array()).sum();
      const double exact = n == m ? 2.0 / (2.0 * n + 1.0) : 0.0;
      worst = std::max(worst, std::abs(integral - exact));
    }
  }

  const Eigen::MatrixXd r = jacobi_coupling(order);
  const QuadratureRule fine = gauss_legendre(2 * order);
  for (int p = 0; p < order; ++p) {
    Eigen::VectorXd f_mom = Eigen::VectorXd::Zero(order + 1);
    Eigen::VectorXd xf_mom = Eigen::VectorXd::Zero(order + 1);
    for (Eigen::Index node = 0; node < fine.nodes.size(); ++node) {
      const Eigen::VectorXd values = legendre_eval(order, fine.nodes(node));
      f_mom += fine.weights(node) * values(p) * values;
      xf_mom += fine.weights(node) * fine.nodes(node) * values(p) * values;
    }
    worst = std::max(worst, (xf_mom - r * f_mom).lpNorm<Eigen::Infinity>());
  }

  Criterion c;
  c.pass = worst <= 1e-13;
  c.detail = "worst orthogonality/multiplication residual " + format_g17(worst) +
             " (tol 1e-13)";
  return c;
}

// 10: byte determinism of every acceptance config

Criterion criterion_determinism() {
  const char* names[] = {"w_n5_single",  "heds_n5_single", "ghz_n5_single",
                         "w_n5_double",  "heds_n5_double", "ghz_n5_double"};
  Criterion c;
  std::ostringstream detail;
  for (const char* name : names) {
    const DesignRun& first = cached_design(name);
    std::printf("  ... re-running %s for the determinism check\n", name);
    std::fflush(stdout);
    const DesignRun second = execute_design(first.config, out_root() / name / "run2");
    bool same = true;
    for (const char* file : {"pulse.csv", "history.csv", "fidelity_map.csv", "summary.json"}) {
      same = same && slurp(first.out_dir / file) == slurp(second.out_dir / file);
    }
    c.pass = c.pass && same;
    detail << name << (same ? " ok; " : " MISMATCH; ");
  }
  c.detail = detail.str();
  return c;
}

struct Spec {
  int id;
  const char* name;
  Criterion (*run)();
};

Criterion run_c1() { return criterion_single("w_n5_single", 0.99, 1.0); }
Criterion run_c2() { return criterion_single("heds_n5_single", 0.98, 1.0); }
Criterion run_c3() { return criterion_single("ghz_n5_single", 0.95, 0.9); }

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    }
  }

  const Spec specs[] = {
      {1, "W single-parameter reproduction (fidelity > 0.99 at every grid node)", run_c1},
      {2, "HEDS single-parameter (min fidelity >= 0.98)", run_c2},
      {3, "GHZ single-parameter (fidelity >= 0.95 on >= 90% of nodes)", run_c3},
      {4, "two-parameter Table targets (mean within 0.02; GHZ min >= 0.85)",
       criterion_two_param},
      {5, "unitarity over 100 random draws (norm drift <= 1e-9)", criterion_unitarity},
      {6, "moment-ensemble duality (gap <= 1e-6 at K=14, decreasing in K)", criterion_duality},
      {7, "gradient oracle (sensitivity vs central differences <= 1e-4)", criterion_gradient},
      {8, "QP KKT oracle (residuals <= 1e-8)", criterion_qp},
      {9, "Legendre/Jacobi exactness (<= 1e-13 up to order 14)", criterion_legendre},
      {10, "byte-identical outputs across repeated runs", criterion_determinism},
  };

  std::filesystem::create_directories(out_root());
  int failures = 0;
  for (const Spec& spec : specs) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), spec.id) == selected.end()) {
      continue;
    }
    Criterion result;
    try {
      result = spec.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s -- %s\n", result.pass ? "PASS" : "FAIL", spec.id,
                spec.name, result.detail.c_str());
    std::fflush(stdout);
    if (!result.pass) ++failures;
  }
  return failures;
}
