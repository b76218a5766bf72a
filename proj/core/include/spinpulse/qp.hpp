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
#ifndef SPINPULSE_QP_HPP_
#define SPINPULSE_QP_HPP_

#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "spinpulse/moments.hpp"
#include "spinpulse/objective.hpp"
#include "spinpulse/target.hpp"
#include "spinpulse/types.hpp"

namespace spinpulse {

// Amplitude and slew-rate limits of the control channels. The slew bound is
// symmetric, +-rate_value/t in the literal mode (unbounded at t = 0) or
// +-rate_value throughout in the constant override.
struct SignalRestrictions {
  struct ChannelBounds {
    double min = 0.0;
    double max = 40.0;
  };
  enum class RateMode { kLiteralOverT, kConstant };

  ChannelBounds x;
  ChannelBounds z;
  RateMode rate_mode = RateMode::kLiteralOverT;
  double rate_value = 1e4;

  double rate_magnitude(double t) const;
};

// Throws std::invalid_argument if a pulse violates the box or discretized
// rate bounds by more than tol.
void require_feasible(const ControlPulse& pulse, const SignalRestrictions& restr,
                      double tol = 1e-9);

// Thrown when the combined box/rate constraint set is empty; carries the
// sample indices (per channel, in [0, steps)) where the reachable interval
// collapsed.
class QpInfeasible : public std::runtime_error {
 public:
  QpInfeasible(const std::string& message, std::vector<Eigen::Index> indices)
      : std::runtime_error(message), violating_indices(std::move(indices)) {}

  std::vector<Eigen::Index> violating_indices;
};

// Strictly convex step subproblem
//
//   min_x ||r + G x||^2 + lambda ||x||^2
//   s.t.  box_lower <= x <= box_upper
//         rate_lower <= (D x) <= rate_upper
//
// where D takes forward differences within each of the two channel blocks of
// x (n = 2*samples, md = 2*(samples-1) difference rows). Rate bounds may be
// +-infinity.
struct BoxRateQp {
  Eigen::MatrixXd G;
  Eigen::VectorXd r;
  double lambda = 1.0;
  Eigen::Index samples = 0;  // per channel; x stacks [channel x | channel z]
  Eigen::VectorXd box_lower, box_upper;    // size 2*samples
  Eigen::VectorXd rate_lower, rate_upper;  // size 2*(samples-1)
};

struct QpSettings {
  int max_iters = 20000;
  double eps_abs = 1e-10;
  double eps_rel = 1e-12;
  double rho = 0.1;
  double sigma = 1e-6;
  double alpha = 1.6;  // over-relaxation
  int polish_interval = 25;  // also the residual check cadence
  int max_rho_updates = 30;
  // Trust-region cap |du| <= step_limit intersected with the amplitude box;
  // infinity reproduces the plain damped Gauss-Newton subproblem.
  double step_limit = std::numeric_limits<double>::infinity();
};

// Primal/dual state carried between related solves (consecutive damped
// Gauss-Newton steps); the dual sign pattern seeds an immediate active-set
// polish attempt before any ADMM iterations run.
struct QpWarmStart {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double rho = 0.0;
  bool valid = false;
};

struct QpKkt {
  double stationarity = 0.0;
  double primal_infeasibility = 0.0;
  double complementarity = 0.0;
};

struct QpResult {
  Eigen::VectorXd x;     // step, [dux; duz]
  Eigen::VectorXd dual;  // multipliers of the [box; rate] rows
  QpKkt kkt;
  int iterations = 0;
  bool polished = false;
};

// Dual/primal residuals of a candidate (x, dual) pair for a BoxRateQp;
// independent of the solve path.
QpKkt kkt_residuals(const BoxRateQp& qp, const Eigen::VectorXd& x, const Eigen::VectorXd& dual);

// ADMM with active-set polish. Deterministic; throws QpInfeasible when the
// constraint set is empty.
QpResult solve_box_rate_qp(const BoxRateQp& qp, const QpSettings& settings = {},
                           QpWarmStart* warm = nullptr);

// Builds and solves the damped Gauss-Newton step subproblem for the current
// pulse: residual and selected sensitivity rows from (momT, target), bounds
// from the restrictions relative to the current pulse. g_full is the full
// sensitivity map (rows [Re|Im] over all flat moments).
QpResult qp_step(const MomentState& momT, const Eigen::MatrixXd& g_full,
                 const TargetProfile& target, const ControlPulse& pulse,
                 const SignalRestrictions& restr, double lambda,
                 LegendreConvention conv = LegendreConvention::kUnnormalized,
                 const QpSettings& settings = {}, QpWarmStart* warm = nullptr);

// The same subproblem data without solving it (used by qp_step and tests).
BoxRateQp build_step_qp(const MomentState& momT, const Eigen::MatrixXd& g_full,
                        const TargetProfile& target, const ControlPulse& pulse,
                        const SignalRestrictions& restr, double lambda,
                        LegendreConvention conv = LegendreConvention::kUnnormalized);

}  // namespace spinpulse

#endif  // SPINPULSE_QP_HPP_
