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
#ifndef SPINPULSE_TYPES_HPP_
#define SPINPULSE_TYPES_HPP_

#include <complex>

#include <Eigen/Core>

namespace spinpulse {

using Complex = std::complex<double>;

// Network of N spin-1/2 particles with symmetric pairwise Ising interactions,
// evolving inside the (N+1)-dimensional Dicke subspace. chi scales the
// entangling drift.
struct SpinNetwork {
  int n_particles = 2;
  double chi = 1.0;

  double spin() const { return 0.5 * n_particles; }
  int dim() const { return n_particles + 1; }
  // Amplitude vectors are ordered from m = S down to m = -S.
  double m_value(int index) const { return spin() - index; }
};

// Throws std::invalid_argument if N < 2 or chi is not finite.
void validate(const SpinNetwork& net);

// Multiplicative gains of the two control Hamiltonians; (1, 1) is the nominal
// system.
struct EnsembleParams {
  double xi = 1.0;
  double zeta = 1.0;
};

// Interval half-widths of the control gains: xi in [1 - delta_xi, 1 + delta_xi]
// and zeta in [1 - delta_zeta, 1 + delta_zeta]. A zero half-width collapses
// that axis to the single point 1.
struct ParameterBox {
  double delta_xi = 0.0;
  double delta_zeta = 0.0;
};

// Throws std::invalid_argument unless both half-widths lie in [0, 1).
void validate(const ParameterBox& box);

// Piecewise-constant control samples u_x, u_z on a uniform time grid; sample k
// holds on [k*dt, (k+1)*dt).
struct ControlPulse {
  Eigen::VectorXd ux;
  Eigen::VectorXd uz;
  double dt = 0.01;

  Eigen::Index steps() const { return ux.size(); }
  double horizon() const { return dt * static_cast<double>(ux.size()); }
};

ControlPulse constant_pulse(double ux, double uz, double dt, Eigen::Index steps);

// Throws std::invalid_argument on mismatched channel lengths, non-finite
// samples, or dt <= 0.
void validate(const ControlPulse& pulse);

// Dicke-basis probability amplitudes C_m at time t, ordered m = S..-S.
struct AmplitudeState {
  Eigen::VectorXcd c;
  double t = 0.0;
};

// |S, -S>, the bottom of the ladder.
AmplitudeState ground_state(const SpinNetwork& net);

// | sum |c_m|^2 - 1 |
double normalization_error(const AmplitudeState& state);

// Throws std::invalid_argument if the probability normalization is violated
// beyond tol.
void require_normalized(const AmplitudeState& state, double tol = 1e-9);

}  // namespace spinpulse

#endif  // SPINPULSE_TYPES_HPP_
