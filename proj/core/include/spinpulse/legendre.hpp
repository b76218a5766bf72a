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
#ifndef SPINPULSE_LEGENDRE_HPP_
#define SPINPULSE_LEGENDRE_HPP_

#include <Eigen/Core>

namespace spinpulse {

// Basis convention for the moment transform. Unnormalized keeps L_0 = 1 with
// <L_n, L_m> = 2/(2n+1) delta_nm; Orthonormal rescales each degree so that
// <P_n, P_m> = delta_nm. Unnormalized is the default throughout: the order-0
// moment of a constant ensemble is then 4x the constant (2 per parameter
// axis), which matches the design objective's order-0 target factor of 4.
enum class LegendreConvention { kUnnormalized, kOrthonormal };

// [L_0(x), ..., L_order(x)] by the three-term recurrence
// (n+1) L_{n+1} = (2n+1) x L_n - n L_{n-1}. Throws std::invalid_argument if
// |x| > 1 + 1e-12.
Eigen::VectorXd legendre_eval(int order, double x,
                              LegendreConvention conv = LegendreConvention::kUnnormalized);

// Per-degree factor mapping unnormalized moments to orthonormal ones,
// s_n = sqrt((2n+1)/2); all ones for the orthonormal convention.
Eigen::VectorXd moment_scale(int order, LegendreConvention conv);

struct QuadratureRule {
  Eigen::VectorXd nodes;    // ascending, interior to [-1, 1]
  Eigen::VectorXd weights;  // positive, summing to 2
};

// Gauss-Legendre rule with n >= 1 points, exact for polynomial degree <= 2n-1.
// The one-point rule {0, 2} doubles as the quadrature of a collapsed
// parameter axis.
QuadratureRule gauss_legendre(int n);

// Action of multiplication-by-x on truncated moment vectors: the moment of
// x*f at degree i is ((i+1) m_{i+1} + i m_{i-1}) / (2i+1) in the unnormalized
// convention, with the coupling to degree order+1 dropped (truncation
// closure). Tridiagonal; symmetric in the orthonormal convention.
Eigen::MatrixXd jacobi_coupling(int order,
                                LegendreConvention conv = LegendreConvention::kUnnormalized);

}  // namespace spinpulse

#endif  // SPINPULSE_LEGENDRE_HPP_
