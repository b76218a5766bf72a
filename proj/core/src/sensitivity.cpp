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
#include "spinpulse/sensitivity.hpp"

#include <cmath>
#include <vector>

namespace spinpulse {
namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-8) {
    return 1.0 - x * x / 6.0;
  }
  return std::sin(x) / x;
}

// Divided differences of f(lam) = exp(-i lam dt) in the step eigenbasis:
// gamma(r, s) = (f(lam_r) - f(lam_s)) / (lam_r - lam_s), continued onto the
// diagonal, in the cancellation-free product form
// -i dt exp(-i (lam_r + lam_s) dt / 2) sinc((lam_r - lam_s) dt / 2).
void fill_divided_differences(const Eigen::VectorXd& lam, double dt, Eigen::MatrixXcd& gamma) {
  const int n = static_cast<int>(lam.size());
  const Complex minus_i_dt{0.0, -dt};
  for (int s = 0; s < n; ++s) {
    for (int r = 0; r < n; ++r) {
      const double mean = 0.5 * (lam(r) + lam(s)) * dt;
      const double half_gap = 0.5 * (lam(r) - lam(s)) * dt;
      gamma(r, s) = minus_i_dt * std::polar(1.0, -mean) * sinc(half_gap);
    }
  }
}

}  // namespace

Eigen::MatrixXd sensitivity_from_cache(const MomentPropagator& prop,
                                       const MomentPropagator::ForwardCache& cache,
                                       const ControlPulse& pulse) {
  const int na = cache.na;
  const int nodes = cache.nodes;
  const int nx = prop.nodes_xi();
  const Eigen::Index steps = cache.steps;
  const Eigen::Index n_m = prop.moment_dim();
  const double dt = pulse.dt;
  const GeneratorSet& gen = prop.generators();

  Eigen::MatrixXd g(2 * n_m, 2 * steps);
  if (steps == 0) {
    return g;
  }

  // Backward accumulation: q holds the product of the step propagators after
  // step k, so the column for sample k is q * dPhi_k * (state entering k).
  std::vector<Eigen::MatrixXcd> q(nodes, Eigen::MatrixXcd::Identity(na, na));

  Eigen::MatrixXcd vc(na, na), gamma(na, na), mhat(na, na), qv(na, na);
  Eigen::MatrixXd xv(na, na), mhat_x(na, na), mhat_z(na, na);
  Eigen::VectorXcd chat(na), w(na), y(na), phase(na);
  Eigen::VectorXcd colx(static_cast<Eigen::Index>(na) * nodes);
  Eigen::VectorXcd colz(static_cast<Eigen::Index>(na) * nodes);

  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    for (int node = 0; node < nodes; ++node) {
      const auto v = cache.v(k, node);
      const auto lam = cache.lam(k, node);
      const auto psi_pre = cache.pre_state(k, node);
      const double gain_xi = prop.node_xi(node % nx);
      const double gain_zeta = prop.node_zeta(node / nx);

      vc = v.cast<Complex>();
      fill_divided_differences(lam, dt, gamma);
      chat.noalias() = vc.adjoint() * psi_pre;

      // d/du_x: direction gain_xi * x
      xv.noalias() = gen.x * v;
      mhat_x.noalias() = v.transpose() * xv;
      mhat = gamma.cwiseProduct(mhat_x.cast<Complex>()) * gain_xi;
      w.noalias() = mhat * chat;
      y.noalias() = vc * w;
      colx.segment(static_cast<Eigen::Index>(na) * node, na).noalias() = q[node] * y;

      // d/du_z: direction gain_zeta * dz (diagonal)
      mhat_z.noalias() = v.transpose() * (gen.dz.asDiagonal() * v);
      mhat = gamma.cwiseProduct(mhat_z.cast<Complex>()) * gain_zeta;
      w.noalias() = mhat * chat;
      y.noalias() = vc * w;
      colz.segment(static_cast<Eigen::Index>(na) * node, na).noalias() = q[node] * y;

      // fold this step into q: q <- q * V exp(-i lam dt) V^T
      for (int r = 0; r < na; ++r) {
        phase(r) = std::polar(1.0, -lam(r) * dt);
      }
      qv.noalias() = q[node] * vc;
      qv = qv * phase.asDiagonal();
      q[node].noalias() = qv * vc.transpose();
    }

    const Eigen::VectorXcd mx = prop.nodes_to_moments(colx);
    const Eigen::VectorXcd mz = prop.nodes_to_moments(colz);
    g.col(k).head(n_m) = mx.real();
    g.col(k).tail(n_m) = mx.imag();
    g.col(steps + k).head(n_m) = mz.real();
    g.col(steps + k).tail(n_m) = mz.imag();
  }
  return g;
}

Eigen::MatrixXd sensitivity(const MomentPropagator& prop, const MomentState& m0,
                            const ControlPulse& pulse) {
  MomentPropagator::ForwardCache cache;
  prop.propagate_cached(m0, pulse, cache);
  return sensitivity_from_cache(prop, cache, pulse);
}

}  // namespace spinpulse
