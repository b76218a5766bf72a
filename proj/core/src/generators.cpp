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
#include "spinpulse/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace spinpulse {

GeneratorSet build_generators(const SpinNetwork& net) {
  validate(net);
  const int dim = net.dim();
  const double s = net.spin();

  GeneratorSet gen;
  gen.d0.resize(dim);
  gen.dz.resize(dim);
  gen.x = Eigen::MatrixXd::Zero(dim, dim);

  for (int idx = 0; idx < dim; ++idx) {
    const double m = net.m_value(idx);
    gen.d0(idx) = net.chi * (2.0 * m * m - 0.5 * net.n_particles);
    gen.dz(idx) = 2.0 * m;
    // C_{m+1} sits one index above (vectors run m = S down to -S); the
    // coupling vanishes at the lattice edges by construction.
    if (idx > 0) {
      const double zeta_plus = std::sqrt((s - m) * (s + m + 1.0));
      gen.x(idx, idx - 1) = zeta_plus;
      gen.x(idx - 1, idx) = zeta_plus;
    }
  }
  return gen;
}

Eigen::MatrixXd hamiltonian_matrix(const GeneratorSet& gen, const EnsembleParams& p,
                                   double ux, double uz) {
  Eigen::MatrixXd a = (p.xi * ux) * gen.x;
  a.diagonal() += gen.d0 + (p.zeta * uz) * gen.dz;
  return a;
}

Eigen::MatrixXd realify(const GeneratorSet& gen, const EnsembleParams& p,
                        double ux, double uz) {
  const Eigen::MatrixXd a = hamiltonian_matrix(gen, p, ux, uz);
  const int n = gen.dim();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  b.topRightCorner(n, n) = a;
  b.bottomLeftCorner(n, n) = -a;
  return b;
}

}  // namespace spinpulse
