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
#include "spinpulse/legendre.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spinpulse {
namespace {

// P_n(x) and P'_n(x) by the standard recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
  double p_prev = 1.0;  // P_0
  double p_curr = x;    // P_1
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p_curr - k * p_prev) / (k + 1.0);
    p_prev = p_curr;
    p_curr = p_next;
  }
  p = p_curr;
  dp = n * (x * p_curr - p_prev) / (x * x - 1.0);
}

}  // namespace

Eigen::VectorXd legendre_eval(int order, double x, LegendreConvention conv) {
  if (order < 0) {
    throw std::invalid_argument("legendre_eval: order must be >= 0");
  }
  if (std::abs(x) > 1.0 + 1e-12) {
    throw std::invalid_argument("legendre_eval: x outside [-1, 1], got " + std::to_string(x));
  }
  Eigen::VectorXd vals(order + 1);
  vals(0) = 1.0;
  if (order >= 1) vals(1) = x;
  for (int n = 1; n < order; ++n) {
    vals(n + 1) = ((2.0 * n + 1.0) * x * vals(n) - n * vals(n - 1)) / (n + 1.0);
  }
  if (conv == LegendreConvention::kOrthonormal) {
    vals.array() *= moment_scale(order, LegendreConvention::kUnnormalized).array();
  }
  return vals;
}

Eigen::VectorXd moment_scale(int order, LegendreConvention conv) {
  Eigen::VectorXd s(order + 1);
  if (conv == LegendreConvention::kOrthonormal) {
    s.setOnes();
    return s;
  }
  for (int n = 0; n <= order; ++n) {
    s(n) = std::sqrt((2.0 * n + 1.0) / 2.0);
  }
  return s;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) {
    throw std::invalid_argument("gauss_legendre: need at least one node");
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  // Newton iteration on the roots of P_n, upper half only; mirror for exact
  // symmetry of the rule.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_pair(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(n - 1 - i) = x;
    rule.weights(n - 1 - i) = w;
    rule.nodes(i) = -x;
    rule.weights(i) = w;
  }
  if (n % 2 == 1) {
    rule.nodes(half - 1) = 0.0;
    double p = 0.0, dp = 0.0;
    legendre_pair(n, 0.0, p, dp);
    rule.weights(half - 1) = 2.0 / (dp * dp);
  }
  return rule;
}

Eigen::MatrixXd jacobi_coupling(int order, LegendreConvention conv) {
  if (order < 0) {
    throw std::invalid_argument("jacobi_coupling: order must be >= 0");
  }
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(order + 1, order + 1);
  for (int i = 0; i <= order; ++i) {
    if (conv == LegendreConvention::kUnnormalized) {
      if (i + 1 <= order) r(i, i + 1) = (i + 1.0) / (2.0 * i + 1.0);
      if (i >= 1) r(i, i - 1) = i / (2.0 * i + 1.0);
    } else {
      if (i + 1 <= order) {
        const double off = (i + 1.0) / std::sqrt((2.0 * i + 1.0) * (2.0 * i + 3.0));
        r(i, i + 1) = off;
        r(i + 1, i) = off;
      }
    }
  }
  return r;
}

}  // namespace spinpulse
