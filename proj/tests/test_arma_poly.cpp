#include <doctest.h>

#include <cmath>

#include "arfima/arma_poly.hpp"

using namespace arfima;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

ArmaParams<double> arma(std::initializer_list<double> ar, std::initializer_list<double> ma) {
  ArmaParams<double> a;
  a.ar = VectorXd::Map(std::data(ar), Eigen::Index(ar.size()));
  a.ma = VectorXd::Map(std::data(ma), Eigen::Index(ma.size()));
  return a;
}

}  // namespace

TEST_CASE("AR(1) weights") {
  const auto a = arma({0.5}, {});
  CHECK((omega_weights(a, 4) - (VectorXd(4) << 1, 0.5, 0.25, 0.125).finished()).norm() < 1e-15);
  CHECK((phi_weights(a, 4) - (VectorXd(4) << 1, -0.5, 0, 0).finished()).norm() < 1e-15);
}

TEST_CASE("white noise and MA(1) weights") {
  const ArmaParams<double> w;
  CHECK(omega_weights(w, 5) == VectorXd::Unit(5, 0));
  CHECK(phi_weights(w, 5) == VectorXd::Unit(5, 0));
  const auto m = arma({}, {0.3});
  CHECK((phi_weights(m, 4) - (VectorXd(4) << 1, -0.3, 0.09, -0.027).finished()).norm() < 1e-15);
}

TEST_CASE("omega and phi are inverse filters") {
  const auto a = arma({0.4, -0.2}, {0.35});
  const VectorXd o = omega_weights(a, 200), p = phi_weights(a, 200);
  const VectorXd e = causal_conv_naive<double>(o, p);
  CHECK((e - VectorXd::Unit(200, 0)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("admissibility checks") {
  CHECK_NOTHROW(check_arma(arma({0.99}, {})));
  CHECK_THROWS_AS(check_arma(arma({1.0}, {})), NonInvertible);
  CHECK_THROWS_AS(check_arma(arma({}, {-1.2})), NonInvertible);
  CHECK_THROWS_AS(check_arma(arma({1.2, -0.1}, {})), NonInvertible);
  // (1 - 0.5L) against (1 - 0.5L): common factor
  CHECK_THROWS_AS(check_arma(arma({0.5}, {-0.5})), NonInvertible);
  CHECK_NOTHROW(check_arma(arma({0.5}, {0.5})));
  CHECK(companion_radius<double>((VectorXd(2) << 0.0, 0.25).finished()) == doctest::Approx(0.5));
}

TEST_CASE("truncation length") {
  CHECK(truncation_length(ArmaParams<double>{}) == 2048);
  const Eigen::Index N = truncation_length(arma({0.9}, {}));
  CHECK(N >= 2048);
  CHECK(4.0 * std::log(double(N)) + N * std::log(0.9) < std::log(1e-17));
  CHECK(truncation_length(arma({0.9999}, {})) == (Eigen::Index(1) << 20));
}

TEST_CASE("first-derivative weights against finite differences") {
  const auto a = arma({0.4, -0.2}, {0.35, 0.1});
  const Eigen::Index N = 40;
  const MatrixXd D = dphi_weights(a, phi_weights(a, N));
  const double h = 1e-6;
  for (Eigen::Index k = 0; k < a.p(); ++k) {
    VectorXd vp = a.coeffs(), vm = a.coeffs();
    vp(k) += h;
    vm(k) -= h;
    const VectorXd fd = (phi_weights(ArmaParams<double>::from_coeffs(vp, 2), N) -
                         phi_weights(ArmaParams<double>::from_coeffs(vm, 2), N)) / (2 * h);
    CHECK((D.row(k).transpose() - fd).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("analytic second derivatives match numeric ones") {
  const auto a = arma({0.3}, {0.4, -0.2});
  const auto an = expand_weights(a, 60, true);
  const auto nu = expand_weights(a, 60, false);
  for (Eigen::Index k = 0; k < a.p(); ++k) CHECK((an.d2phi[k] - nu.d2phi[k]).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("b coefficients for AR(1)") {
  const auto w = expand_weights(arma({0.5}, {}), 30);
  const auto b = bh_coeffs(w);
  CHECK(b.b1(0, 0) == 0.0);
  for (Eigen::Index j = 1; j < 30; ++j) CHECK(b.b1(0, j) == doctest::Approx(-std::pow(0.5, double(j - 1))));
  CHECK(b.b2[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("b coefficients for MA(1) by direct summation") {
  const auto a = arma({}, {0.3});
  const Eigen::Index N = 12;
  const auto w = expand_weights(a, N);
  const auto b = bh_coeffs(w);
  for (Eigen::Index j = 0; j < N; ++j) {
    double s = 0, hd = 0;
    for (Eigen::Index i = 0; i <= j; ++i) s += w.omega(i) * w.dphi(0, j - i);
    CHECK(b.b1(0, j) == doctest::Approx(s).epsilon(1e-14));
    for (Eigen::Index i = 1; i <= j; ++i) {
      double bi = 0;
      for (Eigen::Index l = 0; l <= j - i; ++l) bi += w.omega(l) * w.dphi(0, j - i - l);
      hd += bi / double(i);
    }
    CHECK(b.hd(0, j) == doctest::Approx(hd).epsilon(1e-13).scale(1e-15));
  }
  // omega(L) D phi(L) = -L / (1 + 0.3 L): b_j = -(-0.3)^(j-1)
  CHECK(b.b1(0, 2) == doctest::Approx(0.3));
}
