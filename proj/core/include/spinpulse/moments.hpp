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
#ifndef SPINPULSE_MOMENTS_HPP_
#define SPINPULSE_MOMENTS_HPP_

#include <vector>

#include <Eigen/Dense>

#include "spinpulse/generators.hpp"
#include "spinpulse/legendre.hpp"
#include "spinpulse/types.hpp"

namespace spinpulse {

// Truncated Legendre moments m_{a,i,j} of the amplitude ensemble over the
// rescaled parameters (xi*, zeta*) in [-1,1]^2, stored flat with the Dicke
// index fastest: flat = a + dim_a*(i + (order_xi+1)*j). A collapsed (delta=0)
// parameter axis is stored at order 0 with its interval measure 2 absorbed
// into the coefficients, so the order-(0,0) slice of a parameter-independent
// ensemble is always 4x the amplitude vector (unnormalized convention).
struct MomentState {
  Eigen::VectorXcd m;
  int dim_a = 0;
  int order_xi = 0;
  int order_zeta = 0;
  double t = 0.0;

  Eigen::Index flat(int a, int i, int j) const {
    return a + static_cast<Eigen::Index>(dim_a) * (i + (order_xi + 1) * j);
  }
  Complex at(int a, int i, int j) const { return m(flat(a, i, j)); }
  Complex& at(int a, int i, int j) { return m(flat(a, i, j)); }
  Eigen::Index size() const { return m.size(); }
};

// Moments of a parameter-independent initial state.
MomentState initial_moments(const AmplitudeState& psi0, int order_xi, int order_zeta,
                            LegendreConvention conv = LegendreConvention::kUnnormalized);

// Amplitude ensemble sampled on a tensor quadrature grid in the rescaled
// parameters; column p + n_xi*q of states holds the amplitudes at node
// (xi*_p, zeta*_q).
struct EnsembleSamples {
  QuadratureRule xi;
  QuadratureRule zeta;
  Eigen::MatrixXcd states;
  double t = 0.0;
};

// Tensor quadrature approximation of the moment integral; exact when the
// sampled ensemble is polynomial of degree <= 2*nodes-1-order per axis.
// Throws std::invalid_argument when a node count is below order+1.
MomentState moments_from_ensemble(const EnsembleSamples& samples, int order_xi, int order_zeta,
                                  LegendreConvention conv = LegendreConvention::kUnnormalized);

// Pointwise inversion C_a(xi*, zeta*) from truncated moments.
Eigen::VectorXcd reconstruct(const MomentState& mom, double xi_star, double zeta_star,
                             LegendreConvention conv = LegendreConvention::kUnnormalized);

// The linear operator of the truncated moment dynamics at fixed controls:
//
//   dm/dt_{.,i,j} = -i [ (d0 + uz*dz + ux*x) m_{.,i,j}
//                        + uz*delta_zeta * dz (R_zeta m)_{.,i,j}
//                        + ux*delta_xi   * x  (R_xi   m)_{.,i,j} ]
//
// where R_xi / R_zeta are the (truncated) multiplication couplings acting on
// the corresponding parameter index.
class MomentGenerator {
 public:
  MomentGenerator(const GeneratorSet& gen, const ParameterBox& box, int order_xi,
                  int order_zeta, double ux, double uz,
                  LegendreConvention conv = LegendreConvention::kUnnormalized);

  Eigen::VectorXcd apply(const Eigen::VectorXcd& m) const;
  Eigen::MatrixXcd dense() const;

  int dim_a() const { return gen_.dim(); }
  int order_xi() const { return order_xi_; }
  int order_zeta() const { return order_zeta_; }
  Eigen::Index moment_dim() const {
    return static_cast<Eigen::Index>(gen_.dim()) * (order_xi_ + 1) * (order_zeta_ + 1);
  }

 private:
  GeneratorSet gen_;
  ParameterBox box_;
  int order_xi_, order_zeta_;
  double ux_, uz_;
  Eigen::MatrixXd r_xi_, r_zeta_;
};

MomentGenerator moment_generator(const GeneratorSet& gen, const ParameterBox& box,
                                 int order_xi, int order_zeta, double ux, double uz,
                                 LegendreConvention conv = LegendreConvention::kUnnormalized);

// Exact piecewise-constant propagator of the truncated moment dynamics.
//
// The truncated generator is similar, through the per-axis moment scalings and
// the orthogonal eigenbasis of the symmetric Jacobi coupling, to a block
// diagonal family of (N+1)-dimensional Hamiltonians evaluated at the gains
// 1 + delta*theta, where theta ranges over the (order+1)-point Gauss-Legendre
// nodes. Each step applies the exact exponential of that block form, so the
// local error of the advertised exponential is at roundoff level and the
// propagation in the orthonormal metric is unitary.
class MomentPropagator {
 public:
  MomentPropagator(GeneratorSet gen, ParameterBox box, int order_xi, int order_zeta,
                   LegendreConvention conv = LegendreConvention::kUnnormalized);

  int dim_a() const { return gen_.dim(); }
  int order_xi() const { return order_xi_; }
  int order_zeta() const { return order_zeta_; }
  int nodes_xi() const { return order_xi_ + 1; }
  int nodes_zeta() const { return order_zeta_ + 1; }
  int node_count() const { return nodes_xi() * nodes_zeta(); }
  Eigen::Index moment_dim() const { return static_cast<Eigen::Index>(dim_a()) * node_count(); }
  LegendreConvention convention() const { return conv_; }
  const GeneratorSet& generators() const { return gen_; }
  const ParameterBox& box() const { return box_; }

  // Effective control gains of node (p, q), p fastest in the node index.
  double node_xi(int p) const { return 1.0 + box_.delta_xi * theta_xi_(p); }
  double node_zeta(int q) const { return 1.0 + box_.delta_zeta * theta_zeta_(q); }

  // Change of coordinates between flat moment tensors and the block-diagonal
  // node basis (flat node index a + dim_a*(p + nodes_xi*q)).
  Eigen::VectorXcd moments_to_nodes(const Eigen::VectorXcd& m) const;
  Eigen::VectorXcd nodes_to_moments(const Eigen::VectorXcd& psi) const;

  MomentState propagate_final(const MomentState& m0, const ControlPulse& pulse) const;
  std::vector<MomentState> propagate(const MomentState& m0, const ControlPulse& pulse) const;

  // Forward pass retaining per-step spectral data for exact step derivatives.
  struct ForwardCache {
    Eigen::Index steps = 0;
    int nodes = 0;
    int na = 0;
    std::vector<double> eigvecs;   // steps x nodes x na^2, column-major blocks
    std::vector<double> eigvals;   // steps x nodes x na
    std::vector<Complex> pre;      // node states entering each step
    Eigen::VectorXcd final_nodes;  // node state after the last step

    Eigen::Map<const Eigen::MatrixXd> v(Eigen::Index step, int node) const;
    Eigen::Map<const Eigen::VectorXd> lam(Eigen::Index step, int node) const;
    Eigen::Map<const Eigen::VectorXcd> pre_state(Eigen::Index step, int node) const;
  };

  MomentState propagate_cached(const MomentState& m0, const ControlPulse& pulse,
                               ForwardCache& cache) const;

 private:
  void check_dims(const MomentState& m0) const;

  GeneratorSet gen_;
  ParameterBox box_;
  int order_xi_, order_zeta_;
  LegendreConvention conv_;
  Eigen::VectorXd scale_xi_, scale_zeta_;  // input moments -> orthonormal coords
  Eigen::MatrixXd u_xi_, u_zeta_;          // Jacobi eigenbases
  Eigen::VectorXd theta_xi_, theta_zeta_;  // Jacobi eigenvalues (Gauss nodes)
};

// Trajectory of the truncated moment dynamics under a pulse, orders taken from
// m0; returns steps()+1 states including m0.
std::vector<MomentState> propagate_moments(const MomentState& m0, const ControlPulse& pulse,
                                           const GeneratorSet& gen, const ParameterBox& box,
                                           LegendreConvention conv = LegendreConvention::kUnnormalized);

}  // namespace spinpulse

#endif  // SPINPULSE_MOMENTS_HPP_
