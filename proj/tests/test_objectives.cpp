#include <doctest.h>

#include <random>

#include "arfima/objectives.hpp"
#include "arfima/simulate.hpp"

using namespace arfima;

namespace {

VectorXd noise(Index T, unsigned seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  VectorXd x(T);
  for (auto& v : x) v = n(g);
  return x;
}

// direct time-domain residuals of an ARFIMA(1,d,1) model: Gamma-ratio
// weights for the fractional difference, then the ARMA recursion
VectorXd residuals_oracle(double d, double ar, double ma, double mu, const VectorXd& x) {
  const Index T = x.size();
  VectorXd z(T), e(T);
  for (Index t = 0; t < T; ++t) {
    double s = 0;
    for (Index j = 0; j <= t; ++j) s += pi_coeffs_gamma(-d, long(j)) * (x(t - j) - mu);
    z(t) = s;
  }
  for (Index t = 0; t < T; ++t) {
    e(t) = z(t) - (t > 0 ? ar * z(t - 1) : 0.0) - (t > 0 ? ma * e(t - 1) : 0.0);
  }
  return e;
}

ThetaParams arma11(double d, double ar, double ma) {
  ThetaParams t = ThetaParams::ar1(d, ar);
  t.arma.ma = VectorXd::Constant(1, ma);
  return t;
}

}  // namespace

TEST_CASE("convoluted coefficients") {
  CHECK(conv_coeffs(ThetaParams::pure(0.0), 5).c == VectorXd::Ones(5));
  CHECK(conv_coeffs(ThetaParams::pure(1.0), 5).c == VectorXd::Unit(5, 0));
  const auto cc = conv_coeffs(ThetaParams::ar1(0.4, 0.5), 3);
  const VectorXd k0 = pi_coeffs(0.6, 3);
  CHECK(cc.c(0) == doctest::Approx(k0(0)));
  CHECK(cc.c(1) == doctest::Approx(k0(1) - 0.5 * k0(0)));
  CHECK(cc.c(2) == doctest::Approx(k0(2) - 0.5 * k0(1)));
}

TEST_CASE("derivatives of the convoluted coefficients") {
  const ThetaParams th = arma11(0.35, 0.4, -0.3);
  const Index T = 50;
  const auto cc = conv_coeffs(th, T);
  const double h = 1e-6;
  const VectorXd v = th.vec();
  for (Index k = 0; k < v.size(); ++k) {
    VectorXd vp = v, vm = v;
    vp(k) += h;
    vm(k) -= h;
    const VectorXd fd =
        (conv_coeffs(ThetaParams::from_vec(vp, 1), T).c - conv_coeffs(ThetaParams::from_vec(vm, 1), T).c) / (2 * h);
    CHECK((cc.dc.row(k).transpose() - fd).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("residuals") {
  CHECK(residuals(ThetaParams::pure(0.0), 2.5, VectorXd::Constant(6, 2.5)).cwiseAbs().maxCoeff() == 0.0);
  const VectorXd r = residuals(ThetaParams::pure(1.0), 0.0, (VectorXd(2) << 1, 2).finished());
  CHECK(r(0) == doctest::Approx(1.0));
  CHECK(r(1) == doctest::Approx(1.0));
  const VectorXd x = noise(150, 1);
  for (const auto& [d, a, m] : {std::tuple{0.3, 0.5, 0.2}, {-0.4, -0.3, 0.6}, {1.2, 0.1, -0.5}}) {
    const VectorXd o = residuals_oracle(d, a, m, 0.7, x);
    CHECK((residuals(arma11(d, a, m), 0.7, x) - o).cwiseAbs().maxCoeff() < 1e-10 * o.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("simulation round trip recovers the innovations") {
  DgpSpec g{arma11(0.6, -0.4, 0.3), 3.0, 1.5, 500};
  const VectorXd eps = gaussian_innovations(500, 1.5, 77);
  const VectorXd x = simulate_path(g, eps);
  CHECK((residuals(g.theta0, 3.0, x) - eps).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("level estimate") {
  const VectorXd x = noise(40, 2);
  CHECK(mu_hat(ThetaParams::pure(0.0), x) == doctest::Approx(x.mean()));
  CHECK(mu_hat(ThetaParams::pure(1.0), x) == doctest::Approx(x(0)));
  const ThetaParams th = arma11(0.3, 0.2, 0.1);
  const double m = mu_hat(th, x), h = 1e-5;
  const double dL = (residuals(th, m + h, x).squaredNorm() - residuals(th, m - h, x).squaredNorm()) / (4 * h);
  CHECK(std::abs(dL) <= 1e-7 * residuals(th, m, x).squaredNorm());
}

TEST_CASE("profile objective is the minimum over the level") {
  CHECK(css_profile(ThetaParams::pure(0.0), VectorXd::Constant(10, 4.0)) == doctest::Approx(0.0).scale(1));
  const VectorXd x = noise(60, 3);
  const ThetaParams th = ThetaParams::ar1(0.45, -0.3);
  const double L = css_profile(th, x);
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 100; ++i) CHECK(L <= 0.5 * residuals(th, u(g), x).squaredNorm() + 1e-12);
  CHECK(css_known_mu(th, mu_hat(th, x), x) == doctest::Approx(L).epsilon(1e-12));
  CHECK(css_known_mu(th, mu_hat(th, x) + 0.1, x) > L);
  CHECK(css_known_mu(ThetaParams::pure(0.0), 4.0, VectorXd::Constant(10, 4.0)) == 0.0);
}

TEST_CASE("modification term") {
  CHECK(mod_term(ThetaParams::pure(1.0), 17) == doctest::Approx(1.0));
  CHECK(mod_term(ThetaParams::pure(0.0), 2) == doctest::Approx(2.0));
  const double m64 = mod_term(ThetaParams::pure(0.2), 64);
  CHECK(m64 > 1.0);
  CHECK(m64 < 1.2);
  double prev = 1e9;
  for (Index T : {32, 64, 128, 256}) {
    const double m = mod_term(ThetaParams::ar1(0.1, 0.4), T);
    CHECK(m >= 1.0);
    CHECK(m < prev);
    prev = m;
  }
  CHECK(mod_term(ThetaParams::pure(0.0), 32) > mod_term(ThetaParams::pure(0.0), 256));
}

TEST_CASE("modified objective") {
  const VectorXd x = noise(64, 4);
  CHECK(mcss_objective(ThetaParams::pure(1.0), x) == doctest::Approx(css_profile(ThetaParams::pure(1.0), x)));
  for (double d : {-0.5, 0.0, 0.3, 0.8, 1.5}) {
    const ThetaParams th = ThetaParams::ar1(d, 0.3);
    CHECK(mcss_objective(th, x) >= css_profile(th, x));
  }
}

TEST_CASE("trend modification term") {
  // Gram of [1, t], t = 1..3
  CHECK(mod_term_trend(ThetaParams::pure(0.0), 3) == doctest::Approx(6.0));
  const Objective o(ObjectiveKind::mcss(), Deterministic::Trend, noise(30, 6));
  const ThetaParams th = ThetaParams::ar1(0.3, 0.2);
  const auto v = o.evaluate(th);
  CHECK(v.coef.size() == 2);
  CHECK(v.m == doctest::Approx(mod_term_trend(th, 30)));
}

TEST_CASE("noise variance estimate") {
  CHECK(sigma2_hat(ThetaParams::pure(0.0), VectorXd::Constant(20, 1.0)) == doctest::Approx(0.0).scale(1));
  const VectorXd x = noise(50, 7);
  const ThetaParams th = ThetaParams::ar1(0.2, 0.1);
  CHECK(sigma2_hat(th, 2.0 * x) == doctest::Approx(4.0 * sigma2_hat(th, x)));
  DgpSpec g{ThetaParams::ar1(0.3, 0.5), 1.0, 2.0, 8192};
  const VectorXd y = simulate_path(g, 11);
  CHECK(std::abs(sigma2_hat(g.theta0, y) / 4.0 - 1.0) < 0.05);
}

TEST_CASE("scale equivariance") {
  const VectorXd x = noise(80, 8);
  const ThetaParams th = arma11(0.25, 0.3, -0.2);
  CHECK(mu_hat(th, -3.0 * x) == doctest::Approx(-3.0 * mu_hat(th, x)));
  CHECK(css_profile(th, -3.0 * x) == doctest::Approx(9.0 * css_profile(th, x)));
}

TEST_CASE("grid argmin near the truth on a long series") {
  DgpSpec g{ThetaParams::pure(0.3), 0.0, 1.0, 4096};
  const Objective o(ObjectiveKind::css(), Deterministic::Constant, simulate_path(g, 21));
  double best = 1e300, arg = 0;
  for (double d = -0.5; d <= 1.0 + 1e-9; d += 0.05) {
    const double v = o(ThetaParams::pure(d));
    if (v < best) best = v, arg = d;
  }
  CHECK(std::abs(arg - 0.3) <= 0.05 + 1e-9);
}

TEST_CASE("averaged modified objective is minimised further right") {
  const Index T = 64;
  const int R = 200;
  std::vector<double> grid;
  for (double d = -0.4; d <= 0.8 + 1e-9; d += 0.01) grid.push_back(d);
  std::vector<double> css(grid.size(), 0.0), mcss(grid.size(), 0.0);
  for (int r = 0; r < R; ++r) {
    const VectorXd x = simulate_path(DgpSpec{ThetaParams::pure(0.2), 0.0, 1.0, T}, seed_hash(3, 0, r));
    const Objective a(ObjectiveKind::css(), Deterministic::Constant, x);
    const Objective b(ObjectiveKind::mcss(), Deterministic::Constant, x);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      css[i] += a(ThetaParams::pure(grid[i]));
      mcss[i] += b(ThetaParams::pure(grid[i]));
    }
  }
  const auto ia = std::min_element(css.begin(), css.end()) - css.begin();
  const auto ib = std::min_element(mcss.begin(), mcss.end()) - mcss.begin();
  CHECK(grid[ib] > grid[ia]);
}

TEST_CASE("objective errors") {
  CHECK_THROWS_AS(Objective(ObjectiveKind::css(), Deterministic::Constant, VectorXd::Ones(1)), DomainError);
  VectorXd bad = VectorXd::Ones(5);
  bad(2) = std::nan("");
  CHECK_THROWS_AS(Objective(ObjectiveKind::css(), Deterministic::Constant, bad), NonFinite);
  const Objective o(ObjectiveKind::css(), Deterministic::Constant, VectorXd::Ones(5));
  CHECK_THROWS_AS(o(ThetaParams::ar1(0.2, 1.0)), NonInvertible);
}
