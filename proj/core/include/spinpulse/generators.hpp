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
#ifndef SPINPULSE_GENERATORS_HPP_
#define SPINPULSE_GENERATORS_HPP_

#include <Eigen/Core>

#include "spinpulse/types.hpp"

namespace spinpulse {

// Dicke-basis generator matrices of the amplitude dynamics
//
//   i dc/dt = (d0 + zeta*uz*dz + xi*ux*x) c
//
// with diagonal drift d0_m = chi*(2m^2 - N/2), diagonal z-control dz_m = 2m,
// and the symmetric tridiagonal x-control coupling C_m to C_{m+1} with
// zeta_plus = sqrt((S - m)(S + m + 1)) and to C_{m-1} with
// zeta_minus = sqrt((S + m)(S - m + 1)). All three are real, so the assembled
// Hamiltonian is real symmetric for any real gains and controls.
struct GeneratorSet {
  Eigen::VectorXd d0;
  Eigen::VectorXd dz;
  Eigen::MatrixXd x;

  int dim() const { return static_cast<int>(d0.size()); }
};

GeneratorSet build_generators(const SpinNetwork& net);

// A = d0 + p.zeta*uz*dz + p.xi*ux*x (real symmetric, hence Hermitian).
Eigen::MatrixXd hamiltonian_matrix(const GeneratorSet& gen, const EnsembleParams& p,
                                   double ux, double uz);

// Real block generator for the stacked state z = [Re(c); Im(c)]:
// dz/dt = B z with B = [[0, A], [-A, 0]], skew-symmetric since A is symmetric.
Eigen::MatrixXd realify(const GeneratorSet& gen, const EnsembleParams& p,
                        double ux, double uz);

}  // namespace spinpulse

#endif  // SPINPULSE_GENERATORS_HPP_
