#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "spinpulse/generators.hpp"
#include "spinpulse/propagator.hpp"

using namespace spinpulse;

TEST_CASE("generators: N=2 drift and coupling values") {
  const SpinNetwork net{2, 1.0};
  const GeneratorSet gen = build_generators(net);

  // chi (2m^2 - N/2) for m = (1, 0, -1)
  CHECK(gen.d0(0) == doctest::Approx(1.0));
  CHECK(gen.d0(1) == doctest::Approx(-1.0));
  CHECK(gen.d0(2) == doctest::Approx(1.0));

  CHECK(gen.dz(0) == doctest::Approx(2.0));
  CHECK(gen.dz(1) == doctest::Approx(0.0));
  CHECK(gen.dz(2) == doctest::Approx(-2.0));

  const double root2 = std::sqrt(2.0);
  CHECK(gen.x(0, 1) == doctest::Approx(root2));
  CHECK(gen.x(1, 0) == doctest::Approx(root2));
  CHECK(gen.x(1, 2) == doctest::Approx(root2));
  CHECK(gen.x(2, 1) == doctest::Approx(root2));
  CHECK(gen.x(0, 0) == 0.0);
  CHECK(gen.x(0, 2) == 0.0);
}

TEST_CASE("generators: chi scales the drift only") {
  const SpinNetwork net{3, 2.5};
  const GeneratorSet gen = build_generators(net);
  const GeneratorSet unit = build_generators({3, 1.0});
  CHECK((gen.d0 - 2.5 * unit.d0).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((gen.dz - unit.dz).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((gen.x - unit.x).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("generators: lattice edges carry no outside coupling (N=5)") {
  const SpinNetwork net{5, 1.0};
  const GeneratorSet gen = build_generators(net);
  // zeta_minus vanishes at m = -S and zeta_plus at m = +S: the tridiagonal
  // band is everything there is.
  for (int i = 0; i < gen.dim(); ++i) {
    for (int j = 0; j < gen.dim(); ++j) {
      if (std::abs(i - j) > 1) CHECK(gen.x(i, j) == 0.0);
    }
  }
  // interior value: row m = -2.5 couples upward with sqrt((S-m)(S+m+1)) = sqrt(5)
  CHECK(gen.x(5, 4) == doctest::Approx(std::sqrt(5.0)));
  CHECK(gen.x(4, 5) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("generators: invalid networks are rejected") {
  CHECK_THROWS_AS(build_generators({1, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_generators({0, 1.0}), std::invalid_argument);
}

TEST_CASE("hamiltonian_matrix: assembly and symmetry") {
  const SpinNetwork net{2, 1.0};
  const GeneratorSet gen = build_generators(net);

  SUBCASE("controls off leaves the pure drift") {
    const Eigen::MatrixXd a = hamiltonian_matrix(gen, {1.3, 0.7}, 0.0, 0.0);
    CHECK((a - Eigen::MatrixXd(gen.d0.asDiagonal())).lpNorm<Eigen::Infinity>() == 0.0);
  }

  SUBCASE("nominal gains reproduce the single-system generator") {
    const Eigen::MatrixXd a = hamiltonian_matrix(gen, {1.0, 1.0}, 1.0, 0.0);
    CHECK(a(0, 0) == doctest::Approx(1.0));
    CHECK(a(1, 1) == doctest::Approx(-1.0));
    CHECK(a(2, 2) == doctest::Approx(1.0));
    CHECK(a(0, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(a(1, 2) == doctest::Approx(std::sqrt(2.0)));
  }

  SUBCASE("Hermitian (real symmetric) for arbitrary gains") {
    const Eigen::MatrixXd a = hamiltonian_matrix(gen, {0.83, 1.17}, -2.5, 7.1);
    CHECK((a - a.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("realify: block structure, skew symmetry and spectral pairing") {
  const SpinNetwork net{3, 1.0};
  const GeneratorSet gen = build_generators(net);
  const EnsembleParams p{1.1, 0.9};
  const double ux = 1.7, uz = -0.4;

  const Eigen::MatrixXd a = hamiltonian_matrix(gen, p, ux, uz);
  const Eigen::MatrixXd b = realify(gen, p, ux, uz);
  const int n = gen.dim();

  CHECK((b + b.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((b.topRightCorner(n, n) - a).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((b.bottomLeftCorner(n, n) + a).lpNorm<Eigen::Infinity>() == 0.0);

  // eigenvalues come in +-i lambda pairs with lambda the spectrum of A
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_a(a);
  Eigen::EigenSolver<Eigen::MatrixXd> eig_b(b);
  std::vector<double> imag_parts;
  for (int i = 0; i < 2 * n; ++i) {
    CHECK(std::abs(eig_b.eigenvalues()(i).real()) < 1e-10);
    imag_parts.push_back(eig_b.eigenvalues()(i).imag());
  }
  std::sort(imag_parts.begin(), imag_parts.end());
  for (int i = 0; i < n; ++i) {
    // paired +- values
    CHECK(imag_parts[i] == doctest::Approx(-imag_parts[2 * n - 1 - i]).epsilon(1e-10));
  }
  // as a multiset, the imaginary parts are the spectrum of A and its negative
  std::vector<double> expected;
  for (int i = 0; i < n; ++i) {
    expected.push_back(eig_a.eigenvalues()(i));
    expected.push_back(-eig_a.eigenvalues()(i));
  }
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 2 * n; ++i) {
    CHECK(imag_parts[i] == doctest::Approx(expected[i]).epsilon(1e-10));
  }
}

TEST_CASE("realify: real block propagation matches the complex path") {
  const SpinNetwork net{3, 1.0};
  const GeneratorSet gen = build_generators(net);
  const EnsembleParams p{0.9, 1.2};
  SplitMix64 rng(11);
  const Eigen::VectorXcd c0 = oracles::random_unit_state(rng, net.dim());
  const double ux = 2.0, uz = 1.5, t = 0.37;

  const Eigen::MatrixXd b = realify(gen, p, ux, uz);
  Eigen::VectorXd z(2 * net.dim());
  z.head(net.dim()) = c0.real();
  z.tail(net.dim()) = c0.imag();
  const Eigen::VectorXd zt = (t * b).exp() * z;

  const AmplitudeState out = propagate_step({c0, 0.0}, gen, p, ux, uz, t);
  CHECK((out.c.real() - zt.head(net.dim())).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK((out.c.imag() - zt.tail(net.dim())).lpNorm<Eigen::Infinity>() < 1e-10);
}
