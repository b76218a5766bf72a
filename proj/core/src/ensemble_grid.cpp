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
#include "spinpulse/ensemble_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinpulse/legendre.hpp"
#include "spinpulse/propagator.hpp"

namespace spinpulse {
namespace {

Eigen::VectorXd uniform_axis(double delta, int n) {
  if (n < 1) {
    throw std::invalid_argument("SampleGrid: need at least one node per axis");
  }
  if (delta == 0.0 || n == 1) {
    return Eigen::VectorXd::Constant(1, 1.0);
  }
  Eigen::VectorXd nodes(n);
  for (int i = 0; i < n; ++i) {
    nodes(i) = 1.0 - delta + 2.0 * delta * static_cast<double>(i) / (n - 1);
  }
  return nodes;
}

Eigen::VectorXd gauss_axis(double delta, int n) {
  if (n < 1) {
    throw std::invalid_argument("SampleGrid: need at least one node per axis");
  }
  if (delta == 0.0 || n == 1) {
    return Eigen::VectorXd::Constant(1, 1.0);
  }
  const QuadratureRule rule = gauss_legendre(n);
  return Eigen::VectorXd::Ones(n) + delta * rule.nodes;
}

}  // namespace

SampleGrid uniform_grid(const ParameterBox& box, int n_xi, int n_zeta) {
  validate(box);
  SampleGrid grid;
  grid.kind = SampleGrid::Kind::kUniform;
  grid.xi_nodes = uniform_axis(box.delta_xi, n_xi);
  grid.zeta_nodes = uniform_axis(box.delta_zeta, n_zeta);
  return grid;
}

SampleGrid gauss_grid(const ParameterBox& box, int n_xi, int n_zeta) {
  validate(box);
  SampleGrid grid;
  grid.kind = SampleGrid::Kind::kGaussLegendre;
  grid.xi_nodes = gauss_axis(box.delta_xi, n_xi);
  grid.zeta_nodes = gauss_axis(box.delta_zeta, n_zeta);
  return grid;
}

double fidelity(const AmplitudeState& final_state, const TargetProfile& target) {
  require_normalized(final_state);
  if (final_state.c.size() != target.amplitude.size()) {
    throw std::invalid_argument("fidelity: state and target dimension mismatch");
  }
  double gap = 0.0;
  for (int idx : target.support) {
    const double diff = std::abs(final_state.c(idx)) - target.amplitude(idx);
    gap += diff * diff;
  }
  return 1.0 - gap;
}

FidelityMap fidelity_map(const ControlPulse& pulse, const SpinNetwork& net,
                         const GeneratorSet& gen, const SampleGrid& grid,
                         const TargetProfile& target, const AmplitudeState& psi0) {
  if (grid.xi_nodes.size() == 0 || grid.zeta_nodes.size() == 0) {
    throw std::invalid_argument("fidelity_map: empty grid");
  }
  validate(net);
  FidelityMap map;
  map.grid = grid;
  map.values.resize(grid.xi_nodes.size(), grid.zeta_nodes.size());
  for (Eigen::Index j = 0; j < grid.zeta_nodes.size(); ++j) {
    for (Eigen::Index i = 0; i < grid.xi_nodes.size(); ++i) {
      const EnsembleParams p{grid.xi_nodes(i), grid.zeta_nodes(j)};
      try {
        const AmplitudeState final_state = propagate_final(psi0, gen, p, pulse);
        map.values(i, j) = fidelity(final_state, target);
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string(e.what()) + " [at grid cell xi=" +
                                 std::to_string(p.xi) + ", zeta=" + std::to_string(p.zeta) +
                                 "]");
      }
    }
  }
  return map;
}

double effort_index(const Eigen::VectorXd& samples, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("effort_index: dt must be positive");
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < samples.size(); ++k) {
    sum += std::abs(samples(k));
  }
  return sum * dt;
}

Eigen::VectorXd slew_samples(const Eigen::VectorXd& samples, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("slew_samples: dt must be positive");
  }
  if (samples.size() < 2) {
    return Eigen::VectorXd();
  }
  Eigen::VectorXd d(samples.size() - 1);
  for (Eigen::Index k = 0; k + 1 < samples.size(); ++k) {
    d(k) = (samples(k + 1) - samples(k)) / dt;
  }
  return d;
}

MapSummary summarize(const FidelityMap& map) {
  if (map.values.size() == 0) {
    throw std::invalid_argument("summarize: empty fidelity map");
  }
  MapSummary s;
  s.max = map.values(0, 0);
  s.min = map.values(0, 0);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < map.values.cols(); ++j) {
    for (Eigen::Index i = 0; i < map.values.rows(); ++i) {
      const double v = map.values(i, j);
      s.max = std::max(s.max, v);
      s.min = std::min(s.min, v);
      sum += v;
    }
  }
  s.mean = sum / static_cast<double>(map.values.size());
  return s;
}

}  // namespace spinpulse
