#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "spinpulse/legendre.hpp"

using namespace spinpulse;

TEST_CASE("legendre_eval: anchor values and parity") {
  SUBCASE("all ones at x = 1") {
    const Eigen::VectorXd v = legendre_eval(10, 1.0);
    for (int n = 0; n <= 10; ++n) CHECK(v(n) == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("x = 0, K = 2 gives [1, 0, -1/2]") {
    const Eigen::VectorXd v = legendre_eval(2, 0.0);
    CHECK(v(0) == 1.0);
    CHECK(v(1) == 0.0);
    CHECK(v(2) == doctest::Approx(-0.5));
  }

  SUBCASE("parity L_n(-x) = (-1)^n L_n(x)") {
    for (double x : {0.2, 0.55, 0.91}) {
      const Eigen::VectorXd plus = legendre_eval(8, x);
      const Eigen::VectorXd minus = legendre_eval(8, -x);
      for (int n = 0; n <= 8; ++n) {
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        CHECK(minus(n) == doctest::Approx(sign * plus(n)).epsilon(1e-14));
      }
    }
  }

  SUBCASE("rejects points outside the interval") {
    CHECK_THROWS_AS(legendre_eval(3, 1.0 + 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(legendre_eval(3, -1.5), std::invalid_argument);
    CHECK_NOTHROW(legendre_eval(3, 1.0 + 1e-13));
  }
}

TEST_CASE("gauss_legendre: rule structure and exactness") {
  for (int n : {1, 2, 5, 15, 28}) {
    const QuadratureRule rule = gauss_legendre(n);
    REQUIRE(rule.nodes.size() == n);
    CHECK(std::abs(rule.weights.sum() - 2.0) < 1e-14);
    for (int i = 0; i + 1 < n; ++i) CHECK(rule.nodes(i) < rule.nodes(i + 1));
    // exact symmetry by construction
    for (int i = 0; i < n; ++i) {
      CHECK(rule.nodes(i) == -rule.nodes(n - 1 - i));
      CHECK(rule.weights(i) == rule.weights(n - 1 - i));
    }
  }

  SUBCASE("integrates monomials exactly up to degree 2n-1") {
    const QuadratureRule rule = gauss_legendre(6);
    for (int degree = 0; degree <= 11; ++degree) {
      double integral = 0.0;
      for (int i = 0; i < 6; ++i) {
        integral += rule.weights(i) * std::pow(rule.nodes(i), degree);
      }
      const double exact = degree % 2 == 0 ? 2.0 / (degree + 1) : 0.0;
      CHECK(std::abs(integral - exact) < 1e-14);
    }
  }

  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("legendre orthogonality through the K+1 point rule, exact to 1e-13") {
  const int order = 14;
  const QuadratureRule rule = gauss_legendre(order + 1);
  Eigen::MatrixXd basis(rule.nodes.size(), order + 1);
  for (Eigen::Index p = 0; p < rule.nodes.size(); ++p) {
    basis.row(p) = legendre_eval(order, rule.nodes(p)).transpose();
  }
  for (int n = 0; n <= order; ++n) {
    for (int m = 0; m <= order; ++m) {
      const double integral =
          (basis.col(n).array() * basis.col(m).array() * rule.weights.array()).sum();
      const double exact = n == m ? 2.0 / (2.0 * n + 1.0) : 0.0;
      CHECK(std::abs(integral - exact) < 1e-13);
    }
  }
}

TEST_CASE("orthonormal convention rescales to unit inner products") {
  const int order = 6;
  const QuadratureRule rule = gauss_legendre(order + 1);
  for (int n = 0; n <= order; ++n) {
    double norm = 0.0;
    for (Eigen::Index p = 0; p < rule.nodes.size(); ++p) {
      const Eigen::VectorXd v =
          legendre_eval(order, rule.nodes(p), LegendreConvention::kOrthonormal);
      norm += rule.weights(p) * v(n) * v(n);
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-13));
  }
  const Eigen::VectorXd s = moment_scale(order, LegendreConvention::kUnnormalized);
  CHECK(s(0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(s(2) == doctest::Approx(std::sqrt(2.5)));
}

TEST_CASE("jacobi_coupling: multiplication identity against quadrature, exact to 1e-13") {
  const int order = 14;
  const Eigen::MatrixXd r = jacobi_coupling(order);
  const QuadratureRule rule = gauss_legendre(2 * order);
  for (int p = 0; p < order; ++p) {
    Eigen::VectorXd f_mom = Eigen::VectorXd::Zero(order + 1);
    Eigen::VectorXd xf_mom = Eigen::VectorXd::Zero(order + 1);
    for (Eigen::Index node = 0; node < rule.nodes.size(); ++node) {
      const Eigen::VectorXd basis = legendre_eval(order, rule.nodes(node));
      f_mom += rule.weights(node) * basis(p) * basis;
      xf_mom += rule.weights(node) * rule.nodes(node) * basis(p) * basis;
    }
    CHECK((xf_mom - r * f_mom).lpNorm<Eigen::Infinity>() < 1e-13);
  }
}

TEST_CASE("jacobi_coupling: tridiagonal entries and the orthonormal symmetric form") {
  const int order = 5;
  const Eigen::MatrixXd r = jacobi_coupling(order);
  CHECK(r(0, 1) == doctest::Approx(1.0));        // (i+1)/(2i+1) at i=0
  CHECK(r(1, 0) == doctest::Approx(1.0 / 3.0));  // i/(2i+1) at i=1
  CHECK(r(2, 3) == doctest::Approx(3.0 / 5.0));
  CHECK(r(order, order - 1) == doctest::Approx(order / (2.0 * order + 1.0)));

  const Eigen::MatrixXd j = jacobi_coupling(order, LegendreConvention::kOrthonormal);
  CHECK((j - j.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(j(0, 1) == doctest::Approx(1.0 / std::sqrt(3.0)));

  // similarity through the moment scaling maps one onto the other
  const Eigen::VectorXd s = moment_scale(order, LegendreConvention::kUnnormalized);
  const Eigen::MatrixXd similar = s.asDiagonal() * r * s.cwiseInverse().asDiagonal();
  CHECK((similar - j).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("jacobi eigenvalues reproduce the Gauss-Legendre nodes") {
  const int order = 7;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      jacobi_coupling(order, LegendreConvention::kOrthonormal));
  const QuadratureRule rule = gauss_legendre(order + 1);
  CHECK((eig.eigenvalues() - rule.nodes).lpNorm<Eigen::Infinity>() < 1e-13);
}
