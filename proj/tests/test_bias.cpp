#include <doctest.h>

#include <cmath>

#include "arfima/bias.hpp"

using namespace arfima;
using constants::zeta2;
using constants::zeta3;

namespace {

ArmaParams<double> ar1(double f) {
  ArmaParams<double> a;
  a.ar = VectorXd::Constant(1, f);
  return a;
}

ArmaParams<double> ma1(double t) {
  ArmaParams<double> a;
  a.ma = VectorXd::Constant(1, t);
  return a;
}

// Finite-T matrices of a one-coefficient model by literal summation over
// (t, k, s), t < s, as the expectations of products of score terms.
struct Direct {
  MatrixXd A, G1, G2, F1, F2, C1;
};

Direct direct_sums(const ArmaParams<double>& a, Index T) {
  const auto bh = bh_coeffs(expand_weights(a, T + 1));
  auto b = [&](Index i) { return bh.b1(0, i); };
  auto b2 = [&](Index i) { return bh.b2[0](0, i); };
  auto h = [&](Index i) { return bh.hd(0, i); };
  auto ddpi = [&](Index i) {
    double H = 0;
    for (Index j = 1; j < i; ++j) H += 1.0 / double(j);
    return i == 0 ? 0.0 : 2.0 * H / double(i);
  };
  Direct o;
  o.A = MatrixXd::Zero(2, 2);
  o.G1 = o.G2 = o.F1 = o.F2 = o.C1 = o.A;
  const double Td = double(T);
  for (Index t = 1; t <= T; ++t) {
    for (Index j = 1; j < t; ++j) {
      const double dj = double(j);
      o.A(0, 0) += 1.0 / (dj * dj);
      o.A(0, 1) -= b(j) / dj;
      o.A(1, 1) += b(j) * b(j);
      o.F1(0, 0) -= ddpi(j) / dj;
      o.F1(0, 1) += ddpi(j) * b(j);
      o.F1(1, 0) += h(j) / dj;
      o.F1(1, 1) -= h(j) * b(j);
      o.F2(0, 0) += h(j) / dj;
      o.F2(0, 1) -= h(j) * b(j);
      o.F2(1, 0) -= b2(j) / dj;
      o.F2(1, 1) += b2(j) * b(j);
      o.C1(0, 0) -= 3.0 * ddpi(j) / dj;
      o.C1(0, 1) += 2.0 * h(j) / dj + ddpi(j) * b(j);
      o.C1(1, 1) += -b2(j) / dj - 2.0 * b(j) * h(j);
    }
    for (Index k = 1; k < t; ++k)
      for (Index s = t + 1; s <= T; ++s) {
        const Index r = s - t;
        const double k1 = 1.0 / double(k), r1 = 1.0 / double(r), rk1 = 1.0 / double(r + k);
        const double mix = r1 * b(r + k) + rk1 * b(r);
        const double bb = 2.0 * b(r) * b(r + k);
        o.G1(0, 0) -= 2.0 * k1 * r1 * rk1;
        o.G1(0, 1) += 2.0 * b(k) * r1 * rk1;
        o.G1(1, 0) += k1 * mix;
        o.G1(1, 1) -= mix * b(k);
        o.G2(0, 0) += k1 * mix;
        o.G2(0, 1) -= b(k) * mix;
        o.G2(1, 0) -= k1 * bb;
        o.G2(1, 1) += bb * b(k);
      }
  }
  o.A(1, 0) = o.A(0, 1);
  o.C1(1, 0) = o.C1(0, 1);
  for (MatrixXd* m : {&o.A, &o.G1, &o.G2, &o.F1, &o.F2, &o.C1}) *m /= Td;
  return o;
}

double rel(const MatrixXd& a, const MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("finite-T matrices against literal triple sums") {
  for (const auto& a : {ar1(0.5), ar1(-0.7), ma1(0.4)}) {
    for (Index T : {16, 41}) {
      const BiasMatrices m = bias_matrices_exact(a, T);
      const Direct o = direct_sums(a, T);
      CHECK(rel(m.A, o.A) < 1e-12);
      CHECK(rel(m.G[0], o.G1) < 1e-12);
      CHECK(rel(m.G[1], o.G2) < 1e-12);
      CHECK(rel(m.F[0], o.F1) < 1e-12);
      CHECK(rel(m.F[1], o.F2) < 1e-12);
      CHECK(rel(m.C[0], o.C1) < 1e-12);
    }
  }
}

TEST_CASE("pure fractional intrinsic bias constant") {
  const VectorXd b = approx_intrinsic_bias(ArmaParams<double>{}, 100);
  CHECK(100.0 * b(0) == doctest::Approx(-3.0 * zeta3 / (zeta2 * zeta2)).epsilon(1e-12));
  CHECK(-3.0 * zeta3 / (zeta2 * zeta2) == doctest::Approx(-1.3328).epsilon(1e-4));
}

TEST_CASE("exact pure fractional intrinsic bias approaches the limit") {
  const double lim = -3.0 * zeta3 / (zeta2 * zeta2);
  double prev = 1.0;
  for (Index T : {64, 256, 1024, 4096}) {
    const double r = std::abs(double(T) * exact_intrinsic_bias(ArmaParams<double>{}, T)(0) / lim - 1.0);
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("general engine reproduces the ARFIMA(1,d,0) closed forms") {
  for (double f : {-0.8, -0.5, -0.2, 0.0, 0.3, 0.5, 0.8}) {
    const BiasMatrices m = bias_matrices_approx(ar1(f));
    const Arfima1d0Matrices c = arfima1d0_matrices(f);
    CHECK((m.A - c.A).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((m.F[0] - c.F1).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((m.F[1] - c.F2).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((m.G[0] - c.G1).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((m.G[1] - c.G2).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((m.C[0] - c.C01).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((m.C[1] - c.C02).cwiseAbs().maxCoeff() < 1e-9);
  }
  const Arfima1d0Matrices z = arfima1d0_matrices(0.0), e = arfima1d0_matrices(1e-5);
  CHECK((z.G1 - e.G1).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((z.C01 - e.C01).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((z.F1 - e.F1).cwiseAbs().maxCoeff() < 1e-4);
  const Arfima1d0Matrices c = arfima1d0_matrices(0.5);
  CHECK(c.A(0, 1) == doctest::Approx(2 * std::log(2.0)));
  CHECK(c.A(1, 1) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("AR(1) short-memory biases") {
  BiasOptions o;
  o.fix_d = true;
  for (double f : {-0.6, 0.3, 0.7}) {
    const BiasReport r = approx_bias(ThetaParams::ar1(0.0, f), 50, o);
    CHECK(50 * r.intrinsic_bias(0) == doctest::Approx(-2 * f).epsilon(1e-9));
    CHECK(50 * r.score_bias(0) == doctest::Approx(-f - 1).epsilon(1e-9));
  }
  const BiasReport c = closed_form_bias(ClosedFormCase::AR1, ThetaParams::ar1(0.0, 0.3), 10);
  CHECK(10 * c.score_bias(0) == doctest::Approx(-1.3));
  CHECK(10 * c.intrinsic_bias(0) == doctest::Approx(-0.6));
}

TEST_CASE("MA(1) short-memory engine matches direct summation") {
  BiasOptions o;
  o.fix_d = true;
  ThetaParams th = ThetaParams::pure(0.0);
  th.arma = ma1(0.45);
  const BiasReport g = approx_bias(th, 80, o);
  const BiasReport c = closed_form_bias(ClosedFormCase::ARMA_short, th, 80);
  CHECK(g.intrinsic_bias(0) == doctest::Approx(c.intrinsic_bias(0)).epsilon(1e-9));
  CHECK(g.score_bias(0) == doctest::Approx(c.score_bias(0)).epsilon(1e-9));
}

TEST_CASE("approximate score bias") {
  // pure fractional, d0 = 1: zero
  CHECK(std::abs(approx_score_bias(ThetaParams::pure(1.0), 64)(0)) < 1e-12);
  // d0 = 0, T = 32: x100 about -5.78
  CHECK(100 * approx_score_bias(ThetaParams::pure(0.0), 32)(0) == doctest::Approx(-5.78).epsilon(1e-3));
  // AR(1): second bracket component -1/(1 - phi0)
  const ThetaParams th = ThetaParams::ar1(0.2, 0.4);
  const VectorXd s = approx_score_bias(th, 100);
  const MatrixXd A = bias_matrices_approx(th.arma).A;
  const VectorXd r = 100.0 * A * s;
  CHECK(r(1) == doctest::Approx(-1.0 / 0.6).epsilon(1e-9));
  CHECK(r(0) == doctest::Approx(-std::log(100.0) + digamma(0.8) + 1.0 / 0.6).epsilon(1e-9));
  CHECK_THROWS_AS(approx_score_bias(ThetaParams::pure(0.5), 64), BoundaryD);
}

TEST_CASE("infinite-horizon score ratio against a long finite sum") {
  for (const ThetaParams& th : {ThetaParams::ar1(1.2, 0.3), ThetaParams::ar1(1.4, -0.5)}) {
    const VectorXd lim = score_ratio_limit(th, false);
    const ConvolutedCoeffs cc = conv_coeffs(th, 20000);
    const VectorXd fin = cc.dc * cc.c / cc.c.squaredNorm();
    CHECK((lim - fin).cwiseAbs().maxCoeff() < 1e-4);
  }
  ThetaParams m = ThetaParams::pure(0.9);
  m.arma = ma1(-0.3);
  const VectorXd lim = score_ratio_limit(m, false);
  const ConvolutedCoeffs cc = conv_coeffs(m, 200000);
  CHECK((lim - cc.dc * cc.c / cc.c.squaredNorm()).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("closed-form nonstationary ARFIMA(1,d,0) score matches the engine") {
  for (double d0 : {0.7, 1.0, 1.3})
    for (double f : {-0.4, 0.6}) {
      const ThetaParams th = ThetaParams::ar1(d0, f);
      const BiasReport c = closed_form_bias(ClosedFormCase::ARFIMA1d0, th, 100);
      const BiasReport g = approx_bias(th, 100);
      CHECK((c.score_bias - g.score_bias).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((c.intrinsic_bias - g.intrinsic_bias).cwiseAbs().maxCoeff() < 1e-9);
    }
  const BiasReport r = closed_form_bias(ClosedFormCase::ARFIMA0d0, ThetaParams::pure(0.8), 64);
  CHECK(100 * r.total_css(0) == doctest::Approx(-2.63).epsilon(2e-3));
}

TEST_CASE("exact score bias is smaller near the stationarity border") {
  // the approximation carries (1 - 2 d0)^{-1}; at phi0 = 0.5 only the AR
  // component is smaller, for larger phi0 both are
  const BiasReport h = exact_bias(ThetaParams::ar1(0.4, 0.5), 128);
  CHECK(std::abs(h.score_bias(1)) < std::abs(h.score_bias_approx(1)));
  const BiasReport r = exact_bias(ThetaParams::ar1(0.4, 0.8), 128);
  CHECK(std::abs(r.score_bias(0)) < 0.1 * std::abs(r.score_bias_approx(0)));
  CHECK(std::abs(r.score_bias(1)) < 0.1 * std::abs(r.score_bias_approx(1)));
  CHECK(r.total_mu0 == r.intrinsic_bias);
  CHECK(r.total_css == r.score_bias + r.intrinsic_bias);
}

TEST_CASE("exact score bias matches a direct ratio") {
  const ThetaParams th = ThetaParams::ar1(0.3, -0.4);
  const ConvolutedCoeffs cc = conv_coeffs(th, 64);
  VectorXd num = VectorXd::Zero(2);
  double den = 0;
  for (Index t = 0; t < 64; ++t) {
    num += cc.c(t) * cc.dc.col(t);
    den += cc.c(t) * cc.c(t);
  }
  const VectorXd want = bias_matrices_approx(th.arma).A.inverse() * num / den / 64.0;
  CHECK((exact_score_bias(th, 64) - want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("bias table cells") {
  const auto rows = bias_table({32, 256}, {-0.2, 0.5, 1.0});
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].css == doctest::Approx(-9.94).epsilon(5e-4));
  CHECK(rows[0].mu0 == doctest::Approx(-4.16).epsilon(1e-3));
  CHECK(rows[0].mcss == rows[0].mu0);
  CHECK(rows[2].boundary);
  CHECK(rows[3].boundary);
  CHECK(rows[5].css == doctest::Approx(-0.52).epsilon(5e-3));
  CHECK(rows[5].mu0 == doctest::Approx(-0.52).epsilon(5e-3));
  const auto cf = bias_table({64}, {0.8}, {}, true);
  CHECK(cf[0].css == doctest::Approx(-2.63).epsilon(2e-3));
}

TEST_CASE("bias correction of an MCSS fit") {
  FitResult f;
  f.kind = ObjectiveKind::mcss();
  f.T = 64;
  f.theta_hat = ThetaParams::pure(0.31);
  const FitResult g = bcm_correct(f, false);
  CHECK(g.bias_corrected);
  CHECK(g.theta_hat.d == doctest::Approx(0.31 + 3 * zeta3 / (zeta2 * zeta2 * 64)).epsilon(1e-12));
  const FitResult e = bcm_correct(f, true);
  CHECK(e.theta_hat.d == doctest::Approx(0.31 - exact_intrinsic_bias({}, 64)(0)).epsilon(1e-12));
  f.kind = ObjectiveKind::css();
  CHECK_THROWS_AS(bcm_correct(f), ConfigError);
}

TEST_CASE("truncation diagnostics") {
  const BiasReport r = approx_bias(ThetaParams::ar1(0.2, 0.95), 100);
  CHECK(r.truncation_N >= 2048);
  CHECK(r.tail < 1e-12);
}
