// Test-only reference implementations, independent of the library's
// propagation paths: a brute-force RK4 integrator, Pade matrix exponentials
// (Eigen unsupported), and deterministic random helpers.
#ifndef SPINPULSE_TESTS_ORACLES_HPP_
#define SPINPULSE_TESTS_ORACLES_HPP_

#include <unsupported/Eigen/MatrixFunctions>

#include "spinpulse/generators.hpp"
#include "spinpulse/prng.hpp"
#include "spinpulse/types.hpp"

namespace spinpulse::oracles {

// RK4 on dc/dt = -i A(t) c with piecewise-constant controls, substeps per
// control interval.
inline Eigen::VectorXcd rk4_propagate(const GeneratorSet& gen, const EnsembleParams& p,
                                      const ControlPulse& pulse, const Eigen::VectorXcd& c0,
                                      int substeps) {
  const Complex minus_i{0.0, -1.0};
  Eigen::VectorXcd c = c0;
  const double h = pulse.dt / substeps;
  for (Eigen::Index k = 0; k < pulse.steps(); ++k) {
    const Eigen::MatrixXd a = hamiltonian_matrix(gen, p, pulse.ux(k), pulse.uz(k));
    auto rhs = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return minus_i * (a * v); };
    for (int s = 0; s < substeps; ++s) {
      const Eigen::VectorXcd k1 = rhs(c);
      const Eigen::VectorXcd k2 = rhs(c + 0.5 * h * k1);
      const Eigen::VectorXcd k3 = rhs(c + 0.5 * h * k2);
      const Eigen::VectorXcd k4 = rhs(c + h * k3);
      c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return c;
}

// exp(-i A dt) c through Eigen's Pade scaling-and-squaring; a route fully
// independent of the eigendecomposition propagator.
inline Eigen::VectorXcd pade_step(const Eigen::MatrixXd& a, const Eigen::VectorXcd& c,
                                  double dt) {
  const Eigen::MatrixXcd exponent = Complex(0.0, -dt) * a.cast<Complex>();
  return exponent.exp() * c;
}

inline ControlPulse random_pulse(SplitMix64& rng, double lo, double hi, double dt,
                                 Eigen::Index steps) {
  ControlPulse pulse;
  pulse.dt = dt;
  pulse.ux.resize(steps);
  pulse.uz.resize(steps);
  for (Eigen::Index k = 0; k < steps; ++k) {
    pulse.ux(k) = rng.uniform(lo, hi);
    pulse.uz(k) = rng.uniform(lo, hi);
  }
  return pulse;
}

inline Eigen::VectorXcd random_unit_state(SplitMix64& rng, int dim) {
  Eigen::VectorXcd c(dim);
  for (int i = 0; i < dim; ++i) {
    c(i) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  return c / c.norm();
}

}  // namespace spinpulse::oracles

#endif  // SPINPULSE_TESTS_ORACLES_HPP_
