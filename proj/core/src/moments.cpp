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
#include "spinpulse/moments.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace spinpulse {
namespace {

// Order-0 moment of the constant 1 over one parameter axis.
double axis_measure(LegendreConvention conv) {
  return conv == LegendreConvention::kUnnormalized ? 2.0 : std::numbers::sqrt2;
}

constexpr Complex kMinusI{0.0, -1.0};

}  // namespace

MomentState initial_moments(const AmplitudeState& psi0, int order_xi, int order_zeta,
                            LegendreConvention conv) {
  if (order_xi < 0 || order_zeta < 0) {
    throw std::invalid_argument("initial_moments: orders must be >= 0");
  }
  MomentState mom;
  mom.dim_a = static_cast<int>(psi0.c.size());
  mom.order_xi = order_xi;
  mom.order_zeta = order_zeta;
  mom.t = psi0.t;
  mom.m = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(mom.dim_a) * (order_xi + 1) *
                                 (order_zeta + 1));
  const double factor = axis_measure(conv) * axis_measure(conv);
  for (int a = 0; a < mom.dim_a; ++a) {
    mom.at(a, 0, 0) = factor * psi0.c(a);
  }
  return mom;
}

MomentState moments_from_ensemble(const EnsembleSamples& samples, int order_xi, int order_zeta,
                                  LegendreConvention conv) {
  const int nx = static_cast<int>(samples.xi.nodes.size());
  const int nz = static_cast<int>(samples.zeta.nodes.size());
  if (nx < order_xi + 1 || nz < order_zeta + 1) {
    throw std::invalid_argument(
        "moments_from_ensemble: need at least order+1 quadrature nodes per axis");
  }
  if (samples.states.cols() != static_cast<Eigen::Index>(nx) * nz) {
    throw std::invalid_argument("moments_from_ensemble: sample column count mismatch");
  }

  Eigen::MatrixXd lx(nx, order_xi + 1), lz(nz, order_zeta + 1);
  for (int p = 0; p < nx; ++p) {
    lx.row(p) = legendre_eval(order_xi, samples.xi.nodes(p), conv).transpose();
  }
  for (int q = 0; q < nz; ++q) {
    lz.row(q) = legendre_eval(order_zeta, samples.zeta.nodes(q), conv).transpose();
  }
  const Eigen::MatrixXd wlx = samples.xi.weights.asDiagonal() * lx;
  const Eigen::MatrixXd wlz = samples.zeta.weights.asDiagonal() * lz;

  const int na = static_cast<int>(samples.states.rows());
  MomentState mom;
  mom.dim_a = na;
  mom.order_xi = order_xi;
  mom.order_zeta = order_zeta;
  mom.t = samples.t;
  mom.m.resize(static_cast<Eigen::Index>(na) * (order_xi + 1) * (order_zeta + 1));

  Eigen::MatrixXcd sa(nx, nz);
  for (int a = 0; a < na; ++a) {
    for (int q = 0; q < nz; ++q) {
      for (int p = 0; p < nx; ++p) {
        sa(p, q) = samples.states(a, p + static_cast<Eigen::Index>(nx) * q);
      }
    }
    const Eigen::MatrixXcd ma = wlx.transpose() * sa * wlz;
    for (int j = 0; j <= order_zeta; ++j) {
      for (int i = 0; i <= order_xi; ++i) {
        mom.at(a, i, j) = ma(i, j);
      }
    }
  }
  return mom;
}

Eigen::VectorXcd reconstruct(const MomentState& mom, double xi_star, double zeta_star,
                             LegendreConvention conv) {
  const Eigen::VectorXd lx = legendre_eval(mom.order_xi, xi_star, conv);
  const Eigen::VectorXd lz = legendre_eval(mom.order_zeta, zeta_star, conv);
  // Dual weights of the expansion: (2n+1)/2 per degree in the unnormalized
  // convention, 1 in the orthonormal one.
  auto dual = [conv](int n) {
    return conv == LegendreConvention::kUnnormalized ? (2.0 * n + 1.0) / 2.0 : 1.0;
  };
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(mom.dim_a);
  for (int j = 0; j <= mom.order_zeta; ++j) {
    for (int i = 0; i <= mom.order_xi; ++i) {
      const double coeff = dual(i) * dual(j) * lx(i) * lz(j);
      out += coeff * mom.m.segment(mom.flat(0, i, j), mom.dim_a);
    }
  }
  return out;
}

MomentGenerator::MomentGenerator(const GeneratorSet& gen, const ParameterBox& box,
                                 int order_xi, int order_zeta, double ux, double uz,
                                 LegendreConvention conv)
    : gen_(gen), box_(box), order_xi_(order_xi), order_zeta_(order_zeta), ux_(ux), uz_(uz) {
  validate(box_);
  if (order_xi < 0 || order_zeta < 0) {
    throw std::invalid_argument("MomentGenerator: orders must be >= 0");
  }
  if (!std::isfinite(ux) || !std::isfinite(uz)) {
    throw std::invalid_argument("MomentGenerator: controls must be finite");
  }
  r_xi_ = jacobi_coupling(order_xi, conv);
  r_zeta_ = jacobi_coupling(order_zeta, conv);
}

Eigen::VectorXcd MomentGenerator::apply(const Eigen::VectorXcd& m) const {
  if (m.size() != moment_dim()) {
    throw std::invalid_argument("MomentGenerator::apply: dimension mismatch");
  }
  const int na = gen_.dim();
  const int nx = order_xi_ + 1;
  const int nz = order_zeta_ + 1;
  auto slice = [&](const Eigen::VectorXcd& v, int i, int j) {
    return v.segment(static_cast<Eigen::Index>(na) * (i + nx * j), na);
  };

  const Eigen::VectorXd diag0 = gen_.d0 + uz_ * gen_.dz;
  Eigen::VectorXcd out(m.size());
  Eigen::VectorXcd acc(na), y(na);
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) {
      const auto seg = slice(m, i, j);
      y = diag0.asDiagonal() * seg;
      y.noalias() += ux_ * (gen_.x * seg);
      if (box_.delta_zeta != 0.0) {
        acc.setZero();
        if (j > 0) acc += r_zeta_(j, j - 1) * slice(m, i, j - 1);
        if (j + 1 < nz) acc += r_zeta_(j, j + 1) * slice(m, i, j + 1);
        y += (uz_ * box_.delta_zeta) * (gen_.dz.asDiagonal() * acc);
      }
      if (box_.delta_xi != 0.0) {
        acc.setZero();
        if (i > 0) acc += r_xi_(i, i - 1) * slice(m, i - 1, j);
        if (i + 1 < nx) acc += r_xi_(i, i + 1) * slice(m, i + 1, j);
        y.noalias() += (ux_ * box_.delta_xi) * (gen_.x * acc);
      }
      out.segment(static_cast<Eigen::Index>(na) * (i + nx * j), na) = kMinusI * y;
    }
  }
  return out;
}

Eigen::MatrixXcd MomentGenerator::dense() const {
  const Eigen::Index n = moment_dim();
  Eigen::MatrixXcd d(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index col = 0; col < n; ++col) {
    e(col) = 1.0;
    d.col(col) = apply(e);
    e(col) = 0.0;
  }
  return d;
}

MomentGenerator moment_generator(const GeneratorSet& gen, const ParameterBox& box,
                                 int order_xi, int order_zeta, double ux, double uz,
                                 LegendreConvention conv) {
  return MomentGenerator(gen, box, order_xi, order_zeta, ux, uz, conv);
}

MomentPropagator::MomentPropagator(GeneratorSet gen, ParameterBox box, int order_xi,
                                   int order_zeta, LegendreConvention conv)
    : gen_(std::move(gen)), box_(box), order_xi_(order_xi), order_zeta_(order_zeta),
      conv_(conv) {
  validate(box_);
  if (order_xi < 0 || order_zeta < 0) {
    throw std::invalid_argument("MomentPropagator: orders must be >= 0");
  }
  scale_xi_ = moment_scale(order_xi_, conv_);
  scale_zeta_ = moment_scale(order_zeta_, conv_);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.compute(jacobi_coupling(order_xi_, LegendreConvention::kOrthonormal));
  u_xi_ = es.eigenvectors();
  theta_xi_ = es.eigenvalues();
  es.compute(jacobi_coupling(order_zeta_, LegendreConvention::kOrthonormal));
  u_zeta_ = es.eigenvectors();
  theta_zeta_ = es.eigenvalues();
}

void MomentPropagator::check_dims(const MomentState& m0) const {
  if (m0.dim_a != dim_a() || m0.order_xi != order_xi_ || m0.order_zeta != order_zeta_) {
    throw std::invalid_argument("MomentPropagator: moment state dimensions mismatch");
  }
}

Eigen::VectorXcd MomentPropagator::moments_to_nodes(const Eigen::VectorXcd& m) const {
  const int na = dim_a();
  const int nx = nodes_xi();
  const int nz = nodes_zeta();
  Eigen::VectorXcd psi(m.size());
  Eigen::MatrixXcd mt(nx, nz);
  for (int a = 0; a < na; ++a) {
    for (int j = 0; j < nz; ++j) {
      for (int i = 0; i < nx; ++i) {
        mt(i, j) = m(a + static_cast<Eigen::Index>(na) * (i + nx * j)) * scale_xi_(i) *
                   scale_zeta_(j);
      }
    }
    const Eigen::MatrixXcd nodes = u_xi_.transpose() * mt * u_zeta_;
    for (int q = 0; q < nz; ++q) {
      for (int p = 0; p < nx; ++p) {
        psi(a + static_cast<Eigen::Index>(na) * (p + nx * q)) = nodes(p, q);
      }
    }
  }
  return psi;
}

Eigen::VectorXcd MomentPropagator::nodes_to_moments(const Eigen::VectorXcd& psi) const {
  const int na = dim_a();
  const int nx = nodes_xi();
  const int nz = nodes_zeta();
  Eigen::VectorXcd m(psi.size());
  Eigen::MatrixXcd nodes(nx, nz);
  for (int a = 0; a < na; ++a) {
    for (int q = 0; q < nz; ++q) {
      for (int p = 0; p < nx; ++p) {
        nodes(p, q) = psi(a + static_cast<Eigen::Index>(na) * (p + nx * q));
      }
    }
    const Eigen::MatrixXcd mt = u_xi_ * nodes * u_zeta_.transpose();
    for (int j = 0; j < nz; ++j) {
      for (int i = 0; i < nx; ++i) {
        m(a + static_cast<Eigen::Index>(na) * (i + nx * j)) =
            mt(i, j) / (scale_xi_(i) * scale_zeta_(j));
      }
    }
  }
  return m;
}

namespace {

// Per-step work for the block-diagonal node propagation; the per-node
// eigendecompositions are reused while consecutive control samples repeat.
struct NodeStepWork {
  Eigen::MatrixXd a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  std::vector<Eigen::MatrixXd> v;
  std::vector<Eigen::VectorXd> lam;
  Eigen::VectorXcd phase, tmp;
  double last_ux = 0.0, last_uz = 0.0;
  bool valid = false;

  NodeStepWork(int na, int nodes)
      : a(na, na), eig(na), v(nodes, Eigen::MatrixXd(na, na)),
        lam(nodes, Eigen::VectorXd(na)), phase(na), tmp(na) {}

  void refresh(const GeneratorSet& gen, const Eigen::VectorXd& gain_xi,
               const Eigen::VectorXd& gain_zeta, double ux, double uz) {
    if (valid && ux == last_ux && uz == last_uz) return;
    const int nodes = static_cast<int>(gain_xi.size());
    for (int node = 0; node < nodes; ++node) {
      a = (ux * gain_xi(node)) * gen.x;
      a.diagonal() += gen.d0 + (uz * gain_zeta(node)) * gen.dz;
      eig.compute(a);
      v[node] = eig.eigenvectors();
      lam[node] = eig.eigenvalues();
    }
    last_ux = ux;
    last_uz = uz;
    valid = true;
  }

  void advance(int node, double dt, Eigen::Ref<Eigen::VectorXcd> seg) {
    const int na = static_cast<int>(seg.size());
    for (int r = 0; r < na; ++r) {
      phase(r) = std::polar(1.0, -lam[node](r) * dt);
    }
    tmp.noalias() = v[node].transpose() * seg;
    tmp.array() *= phase.array();
    seg.noalias() = v[node] * tmp;
  }
};

}  // namespace

MomentState MomentPropagator::propagate_final(const MomentState& m0,
                                              const ControlPulse& pulse) const {
  check_dims(m0);
  validate(pulse);
  const int na = dim_a();
  const int nx = nodes_xi();
  const int nodes = node_count();

  Eigen::VectorXd gain_xi(nodes), gain_zeta(nodes);
  for (int node = 0; node < nodes; ++node) {
    gain_xi(node) = node_xi(node % nx);
    gain_zeta(node) = node_zeta(node / nx);
  }

  Eigen::VectorXcd psi = moments_to_nodes(m0.m);
  NodeStepWork work(na, nodes);
  for (Eigen::Index k = 0; k < pulse.steps(); ++k) {
    work.refresh(gen_, gain_xi, gain_zeta, pulse.ux(k), pulse.uz(k));
    for (int node = 0; node < nodes; ++node) {
      work.advance(node, pulse.dt, psi.segment(static_cast<Eigen::Index>(na) * node, na));
    }
  }

  MomentState out;
  out.dim_a = na;
  out.order_xi = order_xi_;
  out.order_zeta = order_zeta_;
  out.t = m0.t + pulse.horizon();
  out.m = nodes_to_moments(psi);
  return out;
}

std::vector<MomentState> MomentPropagator::propagate(const MomentState& m0,
                                                     const ControlPulse& pulse) const {
  check_dims(m0);
  validate(pulse);
  const int na = dim_a();
  const int nx = nodes_xi();
  const int nodes = node_count();

  Eigen::VectorXd gain_xi(nodes), gain_zeta(nodes);
  for (int node = 0; node < nodes; ++node) {
    gain_xi(node) = node_xi(node % nx);
    gain_zeta(node) = node_zeta(node / nx);
  }

  std::vector<MomentState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(pulse.steps()) + 1);
  trajectory.push_back(m0);

  Eigen::VectorXcd psi = moments_to_nodes(m0.m);
  NodeStepWork work(na, nodes);
  for (Eigen::Index k = 0; k < pulse.steps(); ++k) {
    work.refresh(gen_, gain_xi, gain_zeta, pulse.ux(k), pulse.uz(k));
    for (int node = 0; node < nodes; ++node) {
      work.advance(node, pulse.dt, psi.segment(static_cast<Eigen::Index>(na) * node, na));
    }
    MomentState snap;
    snap.dim_a = na;
    snap.order_xi = order_xi_;
    snap.order_zeta = order_zeta_;
    snap.t = m0.t + pulse.dt * static_cast<double>(k + 1);
    snap.m = nodes_to_moments(psi);
    trajectory.push_back(std::move(snap));
  }
  return trajectory;
}

Eigen::Map<const Eigen::MatrixXd> MomentPropagator::ForwardCache::v(Eigen::Index step,
                                                                    int node) const {
  const Eigen::Index off = (step * nodes + node) * static_cast<Eigen::Index>(na) * na;
  return {eigvecs.data() + off, na, na};
}

Eigen::Map<const Eigen::VectorXd> MomentPropagator::ForwardCache::lam(Eigen::Index step,
                                                                      int node) const {
  const Eigen::Index off = (step * nodes + node) * static_cast<Eigen::Index>(na);
  return {eigvals.data() + off, na};
}

Eigen::Map<const Eigen::VectorXcd> MomentPropagator::ForwardCache::pre_state(
    Eigen::Index step, int node) const {
  const Eigen::Index off = (step * nodes + node) * static_cast<Eigen::Index>(na);
  return {pre.data() + off, na};
}

MomentState MomentPropagator::propagate_cached(const MomentState& m0, const ControlPulse& pulse,
                                               ForwardCache& cache) const {
  check_dims(m0);
  validate(pulse);
  const int na = dim_a();
  const int nx = nodes_xi();
  const int nodes = node_count();
  const Eigen::Index steps = pulse.steps();

  Eigen::VectorXd gain_xi(nodes), gain_zeta(nodes);
  for (int node = 0; node < nodes; ++node) {
    gain_xi(node) = node_xi(node % nx);
    gain_zeta(node) = node_zeta(node / nx);
  }

  cache.steps = steps;
  cache.nodes = nodes;
  cache.na = na;
  cache.eigvecs.resize(static_cast<std::size_t>(steps) * nodes * na * na);
  cache.eigvals.resize(static_cast<std::size_t>(steps) * nodes * na);
  cache.pre.resize(static_cast<std::size_t>(steps) * nodes * na);

  Eigen::VectorXcd psi = moments_to_nodes(m0.m);
  NodeStepWork work(na, nodes);
  for (Eigen::Index k = 0; k < steps; ++k) {
    work.refresh(gen_, gain_xi, gain_zeta, pulse.ux(k), pulse.uz(k));
    for (int node = 0; node < nodes; ++node) {
      const Eigen::Index voff = (k * nodes + node) * static_cast<Eigen::Index>(na) * na;
      const Eigen::Index soff = (k * nodes + node) * static_cast<Eigen::Index>(na);
      Eigen::Map<Eigen::MatrixXd>(cache.eigvecs.data() + voff, na, na) = work.v[node];
      Eigen::Map<Eigen::VectorXd>(cache.eigvals.data() + soff, na) = work.lam[node];

      auto seg = psi.segment(static_cast<Eigen::Index>(na) * node, na);
      Eigen::Map<Eigen::VectorXcd>(cache.pre.data() + soff, na) = seg;
      work.advance(node, pulse.dt, seg);
    }
  }
  cache.final_nodes = psi;

  MomentState out;
  out.dim_a = na;
  out.order_xi = order_xi_;
  out.order_zeta = order_zeta_;
  out.t = m0.t + pulse.horizon();
  out.m = nodes_to_moments(psi);
  return out;
}

std::vector<MomentState> propagate_moments(const MomentState& m0, const ControlPulse& pulse,
                                           const GeneratorSet& gen, const ParameterBox& box,
                                           LegendreConvention conv) {
  MomentPropagator prop(gen, box, m0.order_xi, m0.order_zeta, conv);
  return prop.propagate(m0, pulse);
}

}  // namespace spinpulse
