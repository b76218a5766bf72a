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
#include "spinpulse/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace spinpulse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Index rate_rows(const BoxRateQp& qp) {
  return qp.samples > 0 ? 2 * (qp.samples - 1) : 0;
}

// A = [I; D] with D the per-channel forward differences.
void apply_a(const BoxRateQp& qp, const Eigen::VectorXd& x, Eigen::VectorXd& ax) {
  const Eigen::Index n = 2 * qp.samples;
  ax.head(n) = x;
  Eigen::Index row = n;
  for (int ch = 0; ch < 2; ++ch) {
    const Eigen::Index base = ch * qp.samples;
    for (Eigen::Index k = 0; k + 1 < qp.samples; ++k) {
      ax(row++) = x(base + k + 1) - x(base + k);
    }
  }
}

void apply_at(const BoxRateQp& qp, const Eigen::VectorXd& y, Eigen::VectorXd& out) {
  const Eigen::Index n = 2 * qp.samples;
  out = y.head(n);
  Eigen::Index row = n;
  for (int ch = 0; ch < 2; ++ch) {
    const Eigen::Index base = ch * qp.samples;
    for (Eigen::Index k = 0; k + 1 < qp.samples; ++k) {
      out(base + k + 1) += y(row);
      out(base + k) -= y(row);
      ++row;
    }
  }
}

// LDL^T of beta*I + rho*Dc^T Dc for one channel chain (tridiagonal with
// off-diagonal -rho); the same factor serves both channels.
struct ChainFactor {
  Eigen::VectorXd d;  // pivot diagonal
  Eigen::VectorXd l;  // unit subdiagonal
  double off = 0.0;

  void factor(double beta, double rho, Eigen::Index kt) {
    d.resize(kt);
    l.resize(kt > 0 ? kt - 1 : 0);
    off = -rho;
    for (Eigen::Index k = 0; k < kt; ++k) {
      double diag = beta;
      if (kt > 1) {
        diag += rho * ((k == 0 || k == kt - 1) ? 1.0 : 2.0);
      }
      if (k == 0) {
        d(k) = diag;
      } else {
        l(k - 1) = off / d(k - 1);
        d(k) = diag - l(k - 1) * off;
      }
    }
  }

  void solve_inplace(Eigen::Ref<Eigen::VectorXd> v) const {
    const Eigen::Index kt = d.size();
    for (Eigen::Index k = 1; k < kt; ++k) v(k) -= l(k - 1) * v(k - 1);
    for (Eigen::Index k = 0; k < kt; ++k) v(k) /= d(k);
    for (Eigen::Index k = kt - 1; k >= 1; --k) v(k - 1) -= l(k - 1) * v(k);
  }
};

// Applies M^{-1} with M = B + 2 G^T G through the Woodbury identity,
// B = beta*I + rho*D^T D.
struct XUpdateSolver {
  ChainFactor chain;
  Eigen::MatrixXd z;  // B^{-1} G^T
  Eigen::LLT<Eigen::MatrixXd> capacitance;
  Eigen::Index kt = 0;
  mutable Eigen::VectorXd t_buf, s_buf;

  void solve_b_inplace(Eigen::VectorXd& v) const {
    chain.solve_inplace(v.head(kt));
    chain.solve_inplace(v.tail(kt));
  }

  void factor(const BoxRateQp& qp, double beta, double rho) {
    kt = qp.samples;
    chain.factor(beta, rho, kt);
    const Eigen::Index nr = qp.G.rows();
    z = qp.G.transpose();
    for (Eigen::Index c = 0; c < nr; ++c) {
      chain.solve_inplace(z.col(c).head(kt));
      chain.solve_inplace(z.col(c).tail(kt));
    }
    Eigen::MatrixXd cap = 2.0 * (qp.G * z);
    cap.diagonal().array() += 1.0;
    capacitance.compute(cap);
  }

  void solve(const BoxRateQp& qp, const Eigen::VectorXd& rhs, Eigen::VectorXd& out) const {
    t_buf = rhs;
    solve_b_inplace(t_buf);
    s_buf.noalias() = qp.G * t_buf;
    capacitance.solveInPlace(s_buf);
    out = t_buf;
    out.noalias() -= 2.0 * (z * s_buf);
  }
};

struct StackedBounds {
  Eigen::VectorXd lower, upper;
};

StackedBounds stacked_bounds(const BoxRateQp& qp) {
  const Eigen::Index n = 2 * qp.samples;
  const Eigen::Index md = rate_rows(qp);
  StackedBounds b;
  b.lower.resize(n + md);
  b.upper.resize(n + md);
  b.lower.head(n) = qp.box_lower;
  b.upper.head(n) = qp.box_upper;
  b.lower.tail(md) = qp.rate_lower;
  b.upper.tail(md) = qp.rate_upper;
  return b;
}

void check_shapes(const BoxRateQp& qp) {
  const Eigen::Index n = 2 * qp.samples;
  const Eigen::Index md = rate_rows(qp);
  if (!(qp.lambda > 0.0)) {
    throw std::invalid_argument("BoxRateQp: lambda must be positive");
  }
  if (qp.G.cols() != n || qp.box_lower.size() != n || qp.box_upper.size() != n ||
      qp.rate_lower.size() != md || qp.rate_upper.size() != md) {
    throw std::invalid_argument("BoxRateQp: inconsistent dimensions");
  }
}

// Forward reachability of the per-channel chains; the constraint set is empty
// iff some reachable interval collapses.
void check_feasibility(const BoxRateQp& qp) {
  std::vector<Eigen::Index> bad;
  const Eigen::Index kt = qp.samples;
  for (Eigen::Index i = 0; i < 2 * kt; ++i) {
    if (qp.box_lower(i) > qp.box_upper(i)) bad.push_back(i);
  }
  for (Eigen::Index r = 0; r < rate_rows(qp); ++r) {
    if (qp.rate_lower(r) > qp.rate_upper(r)) {
      const Eigen::Index ch = r / (kt - 1);
      bad.push_back(ch * kt + (r % (kt - 1)) + 1);
    }
  }
  if (bad.empty()) {
    for (int ch = 0; ch < 2; ++ch) {
      const Eigen::Index base = ch * kt;
      const Eigen::Index rbase = ch * (kt > 0 ? kt - 1 : 0);
      double lo = qp.box_lower(base), hi = qp.box_upper(base);
      for (Eigen::Index k = 0; k + 1 < kt; ++k) {
        lo = std::max(qp.box_lower(base + k + 1), lo + qp.rate_lower(rbase + k));
        hi = std::min(qp.box_upper(base + k + 1), hi + qp.rate_upper(rbase + k));
        if (lo > hi) {
          bad.push_back(base + k + 1);
          break;
        }
      }
    }
  }
  if (!bad.empty()) {
    std::string msg = "qp_step: contradictory box/rate bounds at control sample indices";
    for (Eigen::Index i : bad) msg += " " + std::to_string(i);
    throw QpInfeasible(msg, std::move(bad));
  }
}

struct PInverse {
  // P = 2 lambda I + 2 G^T G applied inversely through the dual Gram matrix.
  const BoxRateQp* qp = nullptr;
  Eigen::LLT<Eigen::MatrixXd> gram;  // lambda I + G G^T

  void factor(const BoxRateQp& problem) {
    qp = &problem;
    Eigen::MatrixXd g = problem.G * problem.G.transpose();
    g.diagonal().array() += problem.lambda;
    gram.compute(g);
  }

  // x minimizing the unconstrained objective, via the push-through identity
  // -(G^T G + lambda I)^{-1} G^T r = -G^T (G G^T + lambda I)^{-1} r.
  Eigen::VectorXd unconstrained_minimizer() const {
    return -(qp->G.transpose() * gram.solve(qp->r));
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    Eigen::VectorXd gv = qp->G * v;
    gram.solveInPlace(gv);
    return (v - qp->G.transpose() * gv) / (2.0 * qp->lambda);
  }
};

Eigen::VectorXd gradient_q(const BoxRateQp& qp) { return 2.0 * (qp.G.transpose() * qp.r); }

Eigen::VectorXd apply_p(const BoxRateQp& qp, const Eigen::VectorXd& x) {
  return 2.0 * (qp.G.transpose() * (qp.G * x)) + (2.0 * qp.lambda) * x;
}

// +1 upper-active, -1 lower-active, 0 inactive; box and difference (tie) rows
// kept separately.
struct RowStates {
  std::vector<int> box;
  std::vector<int> tie;

  bool operator==(const RowStates& other) const = default;

  Eigen::Index actives() const {
    Eigen::Index count = 0;
    for (int s : box) count += s != 0;
    for (int s : tie) count += s != 0;
    return count;
  }
};

// Primal-dual active set rule: a row is guessed active where the combined
// dual/violation indicator y + (Ax - bound) crosses zero.
RowStates states_from_iterate(const BoxRateQp& qp, const StackedBounds& bounds,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = 2 * qp.samples;
  const Eigen::Index md = rate_rows(qp);
  Eigen::VectorXd ax(n + md);
  apply_a(qp, x, ax);

  RowStates states;
  states.box.assign(n, 0);
  states.tie.assign(md, 0);
  for (Eigen::Index i = 0; i < n + md; ++i) {
    int state = 0;
    if (std::isfinite(bounds.upper(i)) && y(i) + (ax(i) - bounds.upper(i)) > 0.0) {
      state = 1;
    } else if (std::isfinite(bounds.lower(i)) && y(i) + (ax(i) - bounds.lower(i)) < 0.0) {
      state = -1;
    }
    if (i < n) {
      states.box[i] = state;
    } else {
      states.tie[i - n] = state;
    }
  }
  return states;
}

// Equality-constrained solve on a candidate active set. Active ties join
// adjacent samples into runs and an active box row pins a run, so the
// subproblem reduces to an unconstrained ridge problem over one scalar per
// free run; that reduced problem is solved in the dual (Gram) form, which
// stays stable for arbitrarily small damping. Multipliers are recovered by
// telescoping the stationarity equations along each run. Returns the
// candidate without certifying optimality.
bool solve_active_set(const BoxRateQp& qp, RowStates states, const Eigen::VectorXd& pin_priority,
                      Eigen::VectorXd& x_out, Eigen::VectorXd& y_out) {
  const Eigen::Index kt = qp.samples;
  const Eigen::Index n = 2 * kt;
  const Eigen::Index md = rate_rows(qp);

  auto tie_bound = [&](Eigen::Index r) {
    return states.tie[r] > 0 ? qp.rate_upper(r) : qp.rate_lower(r);
  };
  auto box_bound = [&](Eigen::Index i) {
    return states.box[i] > 0 ? qp.box_upper(i) : qp.box_lower(i);
  };

  // Runs of consecutive samples joined by active ties; at most one pin per
  // run is kept (largest priority wins, the rest are implied).
  Eigen::VectorXd x_off = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Index> group_of(n, -1);
  std::vector<double> group_size;
  std::vector<Eigen::Index> run_end(n), pin_of_run(n, -1);

  for (int ch = 0; ch < 2; ++ch) {
    const Eigen::Index base = ch * kt;
    const Eigen::Index rbase = ch * (kt > 0 ? kt - 1 : 0);
    Eigen::Index s = 0;
    while (s < kt) {
      Eigen::Index e = s;
      while (e + 1 < kt && states.tie[rbase + e] != 0) ++e;
      double acc = 0.0;
      for (Eigen::Index j = s; j <= e; ++j) {
        x_off(base + j) = acc;
        if (j < e) acc += tie_bound(rbase + j);
      }
      Eigen::Index pin = -1;
      for (Eigen::Index j = s; j <= e; ++j) {
        if (states.box[base + j] == 0) continue;
        if (pin < 0 ||
            std::abs(pin_priority(base + j)) > std::abs(pin_priority(base + pin))) {
          pin = j;
        }
      }
      for (Eigen::Index j = s; j <= e; ++j) {
        if (j != pin) states.box[base + j] = 0;
      }
      run_end[base + s] = e;
      pin_of_run[base + s] = pin;
      if (pin >= 0) {
        // anchored run: every sample is implied by the pin and the tie offsets
        const double anchor = box_bound(base + pin) - x_off(base + pin);
        for (Eigen::Index j = s; j <= e; ++j) x_off(base + j) += anchor;
      } else {
        // free run: one scalar for the whole run (singletons reproduce the
        // unconstrained coordinate)
        const Eigen::Index g = static_cast<Eigen::Index>(group_size.size());
        for (Eigen::Index j = s; j <= e; ++j) group_of[base + j] = g;
        group_size.push_back(static_cast<double>(e - s + 1));
      }
      s = e + 1;
    }
  }

  // Reduced ridge problem over the free-group scalars, dual (Gram) form:
  //   w_hat = -b + Gv^T (Gv Gv^T + lambda I)^{-1} (Gv b - r0)
  // with Gv the group-summed columns of G scaled by 1/sqrt(size) and
  // b = D^{-1/2} E^T x_off.
  const Eigen::Index n_g = static_cast<Eigen::Index>(group_size.size());
  const Eigen::Index nr = qp.G.rows();
  Eigen::MatrixXd gv = Eigen::MatrixXd::Zero(nr, n_g);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_g);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (group_of[j] >= 0) {
      gv.col(group_of[j]) += qp.G.col(j);
      b(group_of[j]) += x_off(j);
    }
  }
  for (Eigen::Index g = 0; g < n_g; ++g) {
    const double scale = 1.0 / std::sqrt(group_size[g]);
    gv.col(g) *= scale;
    b(g) *= scale;
  }
  const Eigen::VectorXd r0 = qp.r + qp.G * x_off;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nr, nr);
  k.selfadjointView<Eigen::Lower>().rankUpdate(gv);
  k.diagonal().array() += qp.lambda;
  Eigen::LLT<Eigen::MatrixXd> k_llt(k.selfadjointView<Eigen::Lower>());
  if (k_llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd w_hat = -b + gv.transpose() * k_llt.solve(gv * b - r0);

  x_out = x_off;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (group_of[j] >= 0) {
      x_out(j) += w_hat(group_of[j]) / std::sqrt(group_size[group_of[j]]);
    }
  }
  if (!x_out.allFinite()) return false;

  // Multiplier recovery: telescope P x + q + A^T nu = 0 along each run.
  const Eigen::VectorXd g_res =
      2.0 * (qp.G.transpose() * (qp.G * x_out + qp.r)) + (2.0 * qp.lambda) * x_out;
  y_out = Eigen::VectorXd::Zero(n + md);
  for (int ch = 0; ch < 2; ++ch) {
    const Eigen::Index base = ch * kt;
    const Eigen::Index rbase = ch * (kt > 0 ? kt - 1 : 0);
    Eigen::Index s = 0;
    while (s < kt) {
      const Eigen::Index e = run_end[base + s];
      const Eigen::Index pin = pin_of_run[base + s];
      double nu_box = 0.0;
      if (pin >= 0) {
        for (Eigen::Index j = s; j <= e; ++j) nu_box -= g_res(base + j);
        y_out(base + pin) = nu_box;
      }
      double carry = 0.0;
      for (Eigen::Index j = s; j < e; ++j) {
        carry += g_res(base + j) + (j == pin ? nu_box : 0.0);
        y_out(n + rbase + j) = carry;
      }
      s = e + 1;
    }
  }
  return y_out.allFinite();
}

bool certify(const BoxRateQp& qp, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
             double kkt_tol, QpResult& result) {
  const QpKkt kkt = kkt_residuals(qp, x, y);
  if (kkt.stationarity > kkt_tol || kkt.primal_infeasibility > kkt_tol ||
      kkt.complementarity > kkt_tol) {
    return false;
  }
  result.x = x;
  result.dual = y;
  result.kkt = kkt;
  result.polished = true;
  return true;
}

// Primal-dual active set iteration from a starting pair: re-solve on the
// guessed set until the guess reproduces itself, then certify. Converges in a
// handful of rounds when started anywhere near the solution, independent of
// the damping scale.
bool pdas_solve(const BoxRateQp& qp, const StackedBounds& bounds, const Eigen::VectorXd& x0,
                const Eigen::VectorXd& y0, double kkt_tol, int max_rounds, QpResult& result,
                Eigen::VectorXd* x_last = nullptr, Eigen::VectorXd* y_last = nullptr) {
  Eigen::VectorXd x = x0, y = y0;
  RowStates states = states_from_iterate(qp, bounds, x, y);
  RowStates previous;
  for (int round = 0; round < max_rounds; ++round) {
    if (states.actives() == 0) return false;  // interior; the fast path owns this
    Eigen::VectorXd x_new, y_new;
    if (!solve_active_set(qp, states, y, x_new, y_new)) return false;
    x = x_new;
    y = y_new;
    if (x_last != nullptr) *x_last = x;
    if (y_last != nullptr) *y_last = y;
    RowStates next = states_from_iterate(qp, bounds, x, y);
    if (next == states) {
      return certify(qp, x, y, kkt_tol, result);
    }
    if (next == previous) {
      // two-cycle: accept only if the current pair already certifies
      return certify(qp, x, y, kkt_tol, result);
    }
    previous = std::move(states);
    states = std::move(next);
  }
  return false;
}

}  // namespace

double SignalRestrictions::rate_magnitude(double t) const {
  if (rate_mode == RateMode::kConstant) {
    return rate_value;
  }
  if (t <= 0.0) {
    return kInf;
  }
  return rate_value / t;
}

void require_feasible(const ControlPulse& pulse, const SignalRestrictions& restr, double tol) {
  validate(pulse);
  for (Eigen::Index k = 0; k < pulse.steps(); ++k) {
    if (pulse.ux(k) < restr.x.min - tol || pulse.ux(k) > restr.x.max + tol ||
        pulse.uz(k) < restr.z.min - tol || pulse.uz(k) > restr.z.max + tol) {
      throw std::invalid_argument("pulse violates amplitude bounds at sample " +
                                  std::to_string(k));
    }
  }
  for (Eigen::Index k = 0; k + 1 < pulse.steps(); ++k) {
    const double limit = restr.rate_magnitude(pulse.dt * static_cast<double>(k)) * pulse.dt;
    if (!std::isfinite(limit)) continue;
    if (std::abs(pulse.ux(k + 1) - pulse.ux(k)) > limit + tol ||
        std::abs(pulse.uz(k + 1) - pulse.uz(k)) > limit + tol) {
      throw std::invalid_argument("pulse violates slew bounds at sample " + std::to_string(k));
    }
  }
}

QpKkt kkt_residuals(const BoxRateQp& qp, const Eigen::VectorXd& x, const Eigen::VectorXd& dual) {
  const Eigen::Index n = 2 * qp.samples;
  const Eigen::Index rows = n + rate_rows(qp);
  const StackedBounds bounds = stacked_bounds(qp);

  Eigen::VectorXd ax(rows);
  apply_a(qp, x, ax);
  Eigen::VectorXd aty(n);
  apply_at(qp, dual, aty);

  QpKkt kkt;
  kkt.stationarity = (apply_p(qp, x) + gradient_q(qp) + aty).lpNorm<Eigen::Infinity>();
  for (Eigen::Index i = 0; i < rows; ++i) {
    kkt.primal_infeasibility = std::max(kkt.primal_infeasibility,
                                        std::max(bounds.lower(i) - ax(i), ax(i) - bounds.upper(i)));
    if (dual(i) > 0.0) {
      const double gap = std::isfinite(bounds.upper(i)) ? std::abs(bounds.upper(i) - ax(i)) : 1e16;
      kkt.complementarity = std::max(kkt.complementarity, dual(i) * gap);
    } else if (dual(i) < 0.0) {
      const double gap = std::isfinite(bounds.lower(i)) ? std::abs(ax(i) - bounds.lower(i)) : 1e16;
      kkt.complementarity = std::max(kkt.complementarity, -dual(i) * gap);
    }
  }
  kkt.primal_infeasibility = std::max(kkt.primal_infeasibility, 0.0);
  return kkt;
}

QpResult solve_box_rate_qp(const BoxRateQp& qp, const QpSettings& settings, QpWarmStart* warm) {
  check_shapes(qp);
  const Eigen::Index n = 2 * qp.samples;
  const Eigen::Index rows = n + rate_rows(qp);

  QpResult result;
  if (n == 0) {
    result.x.resize(0);
    result.dual.resize(0);
    if (warm != nullptr) warm->valid = false;
    return result;
  }
  check_feasibility(qp);
  const StackedBounds bounds = stacked_bounds(qp);
  const double kkt_tol = 1e-9;

  PInverse pinv;
  pinv.factor(qp);

  auto save_warm = [&](const Eigen::VectorXd& x_save, const Eigen::VectorXd& y_save,
                       double rho_save) {
    if (warm == nullptr) return;
    warm->x = x_save;
    warm->y = y_save;
    warm->rho = rho_save;
    warm->valid = true;
  };

  // Interior fast path: the unconstrained ridge minimizer, exact when it
  // lands inside the constraint set.
  {
    Eigen::VectorXd x_uc = pinv.unconstrained_minimizer();
    Eigen::VectorXd ax(rows);
    apply_a(qp, x_uc, ax);
    const double slack = 1e-12;
    bool inside = true;
    for (Eigen::Index i = 0; i < rows && inside; ++i) {
      inside = ax(i) >= bounds.lower(i) - slack && ax(i) <= bounds.upper(i) + slack;
    }
    if (inside) {
      x_uc = x_uc.cwiseMax(qp.box_lower).cwiseMin(qp.box_upper);
      result.x = x_uc;
      result.dual = Eigen::VectorXd::Zero(rows);
      result.kkt = kkt_residuals(qp, result.x, result.dual);
      result.polished = true;
      save_warm(result.x, result.dual, warm != nullptr && warm->rho > 0.0 ? warm->rho
                                                                          : settings.rho);
      return result;
    }
  }

  // Primal-dual active set from the warm pair (or from the clipped
  // unconstrained minimizer); typically certifies within a few rounds and
  // independently of the damping scale.
  const bool warm_usable =
      warm != nullptr && warm->valid && warm->x.size() == n && warm->y.size() == rows;
  {
    const Eigen::VectorXd x_seed =
        warm_usable ? warm->x
                    : pinv.unconstrained_minimizer().cwiseMax(qp.box_lower).cwiseMin(
                          qp.box_upper);
    const Eigen::VectorXd y_seed =
        warm_usable ? warm->y : Eigen::VectorXd::Zero(rows);
    if (pdas_solve(qp, bounds, x_seed, y_seed, kkt_tol, 60, result)) {
      save_warm(result.x, result.dual,
                warm_usable && warm->rho > 0.0 ? warm->rho : settings.rho);
      return result;
    }
  }

  // ADMM on min 1/2 x^T P x + q^T x s.t. l <= A x <= u, OSQP-style splitting.
  const Eigen::VectorXd q = gradient_q(qp);
  double rho = warm_usable && warm->rho > 0.0 ? warm->rho : settings.rho;
  const double sigma = settings.sigma;

  XUpdateSolver xsolver;
  xsolver.factor(qp, 2.0 * qp.lambda + sigma + rho, rho);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
  if (warm_usable) {
    x = warm->x;
    y = warm->y;
  }
  {
    Eigen::VectorXd ax(rows);
    apply_a(qp, x, ax);
    z = ax.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
  }

  Eigen::VectorXd rhs(n), xt(n), azt(rows), zprev(rows), ax(rows), aty(n), rd(n), v(rows);
  int rho_updates = 0;
  const int cadence = std::max(settings.polish_interval, 1);

  for (int iter = 1; iter <= settings.max_iters; ++iter) {
    // x-update
    apply_at(qp, rho * z - y, rhs);
    rhs += sigma * x - q;
    xsolver.solve(qp, rhs, xt);
    apply_a(qp, xt, azt);

    // relaxed z/y updates
    zprev = z;
    x = settings.alpha * xt + (1.0 - settings.alpha) * x;
    v = settings.alpha * azt + (1.0 - settings.alpha) * zprev + y / rho;
    z = v.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
    y += rho * (settings.alpha * azt + (1.0 - settings.alpha) * zprev - z);

    if (iter % cadence != 0 && iter != settings.max_iters) continue;

    apply_a(qp, x, ax);
    apply_at(qp, y, aty);
    const double r_prim = (ax - z).lpNorm<Eigen::Infinity>();
    rd = apply_p(qp, x) + q + aty;
    const double r_dual = rd.lpNorm<Eigen::Infinity>();

    const double prim_scale = std::max({ax.lpNorm<Eigen::Infinity>(),
                                        z.lpNorm<Eigen::Infinity>(), 1.0});
    const double dual_scale = std::max({q.lpNorm<Eigen::Infinity>(),
                                        aty.lpNorm<Eigen::Infinity>(), 1.0});

    // The active-set estimate stabilizes long before the iterates do; a short
    // primal-dual active set burst from the current pair usually finishes.
    result.iterations = iter;
    if (r_prim < 1e-1 * prim_scale &&
        pdas_solve(qp, bounds, x, y, kkt_tol, 10, result)) {
      save_warm(result.x, result.dual, rho);
      return result;
    }
    if (r_prim <= settings.eps_abs + settings.eps_rel * prim_scale &&
        r_dual <= settings.eps_abs + settings.eps_rel * dual_scale) {
      break;
    }

    // rho adaptation on the residual ratio
    if (rho_updates < settings.max_rho_updates) {
      const double ratio = std::sqrt((r_prim / prim_scale) / std::max(r_dual / dual_scale, 1e-16));
      if (ratio > 5.0 || ratio < 0.2) {
        rho = std::clamp(rho * ratio, 1e-6, 1e6);
        xsolver.factor(qp, 2.0 * qp.lambda + sigma + rho, rho);
        ++rho_updates;
      }
    }
  }

  // Return the ADMM iterate when polishing never certified; residuals are
  // reported honestly.
  result.x = x;
  result.dual = y;
  result.kkt = kkt_residuals(qp, x, y);
  save_warm(x, y, rho);
  return result;
}

BoxRateQp build_step_qp(const MomentState& momT, const Eigen::MatrixXd& g_full,
                        const TargetProfile& target, const ControlPulse& pulse,
                        const SignalRestrictions& restr, double lambda,
                        LegendreConvention conv) {
  const Eigen::Index n_m = momT.size();
  if (g_full.rows() != 2 * n_m || g_full.cols() != 2 * pulse.steps()) {
    throw std::invalid_argument("build_step_qp: sensitivity dimensions mismatch");
  }
  const std::vector<Eigen::Index> sel = residual_indices(momT, target);
  const Eigen::Index ns = static_cast<Eigen::Index>(sel.size());
  const Eigen::Index kt = pulse.steps();

  BoxRateQp qp;
  qp.lambda = lambda;
  qp.samples = kt;
  qp.r = residual(momT, target, conv);
  qp.G.resize(2 * ns, 2 * kt);
  for (Eigen::Index k = 0; k < ns; ++k) {
    qp.G.row(k) = g_full.row(sel[k]);
    qp.G.row(ns + k) = g_full.row(n_m + sel[k]);
  }

  qp.box_lower.resize(2 * kt);
  qp.box_upper.resize(2 * kt);
  qp.box_lower.head(kt) = Eigen::VectorXd::Constant(kt, restr.x.min) - pulse.ux;
  qp.box_upper.head(kt) = Eigen::VectorXd::Constant(kt, restr.x.max) - pulse.ux;
  qp.box_lower.tail(kt) = Eigen::VectorXd::Constant(kt, restr.z.min) - pulse.uz;
  qp.box_upper.tail(kt) = Eigen::VectorXd::Constant(kt, restr.z.max) - pulse.uz;

  const Eigen::Index md = kt > 0 ? kt - 1 : 0;
  qp.rate_lower.resize(2 * md);
  qp.rate_upper.resize(2 * md);
  for (Eigen::Index k = 0; k < md; ++k) {
    const double limit = restr.rate_magnitude(pulse.dt * static_cast<double>(k)) * pulse.dt;
    const double dx = pulse.ux(k + 1) - pulse.ux(k);
    const double dz = pulse.uz(k + 1) - pulse.uz(k);
    qp.rate_lower(k) = -limit - dx;
    qp.rate_upper(k) = limit - dx;
    qp.rate_lower(md + k) = -limit - dz;
    qp.rate_upper(md + k) = limit - dz;
  }
  return qp;
}

QpResult qp_step(const MomentState& momT, const Eigen::MatrixXd& g_full,
                 const TargetProfile& target, const ControlPulse& pulse,
                 const SignalRestrictions& restr, double lambda, LegendreConvention conv,
                 const QpSettings& settings, QpWarmStart* warm) {
  BoxRateQp qp = build_step_qp(momT, g_full, target, pulse, restr, lambda, conv);
  if (std::isfinite(settings.step_limit)) {
    qp.box_lower = qp.box_lower.cwiseMax(-settings.step_limit);
    qp.box_upper = qp.box_upper.cwiseMin(settings.step_limit);
  }
  return solve_box_rate_qp(qp, settings, warm);
}

}  // namespace spinpulse
