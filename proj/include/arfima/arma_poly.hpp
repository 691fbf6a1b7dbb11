#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <vector>

#include "arfima/errors.hpp"
#include "arfima/frac_ops.hpp"

namespace arfima {

// beta(L) = 1 - sum ar_k L^k,  alpha(L) = 1 + sum ma_k L^k.
// Parameter vector order is (ar_1..ar_p1, ma_1..ma_p2).
template <typename Scalar = double>
struct ArmaParams {
  VectorX<Scalar> ar, ma;

  Eigen::Index p1() const { return ar.size(); }
  Eigen::Index p2() const { return ma.size(); }
  Eigen::Index p() const { return ar.size() + ma.size(); }

  VectorX<Scalar> coeffs() const {
    VectorX<Scalar> v(p());
    v << ar, ma;
    return v;
  }

  static ArmaParams from_coeffs(const VectorX<Scalar>& v, Eigen::Index p1) {
    ArmaParams a;
    a.ar = v.head(p1);
    a.ma = v.tail(v.size() - p1);
    return a;
  }
};

template <typename Scalar>
struct WeightTable {
  VectorX<Scalar> omega;  // alpha/beta
  VectorX<Scalar> phi;    // beta/alpha
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dphi;  // p x N
  // d2phi[k] is p x N: second derivative wrt parameters k and row index
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> d2phi;
  Eigen::Index p1 = 0;

  Eigen::Index size() const { return phi.size(); }
  Eigen::Index p() const { return dphi.rows(); }
};

template <typename Scalar>
struct BhCoeffs {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> b1;       // p x N
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> b2;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> hd;       // p x N
};

inline constexpr double kRootMargin = 1e-9;

// spectral radius of the companion matrix of 1 - sum c_k L^k
template <typename Scalar>
Scalar companion_radius(const VectorX<Scalar>& c) {
  const Eigen::Index p = c.size();
  if (p == 0) return Scalar(0);
  if (p == 1) return std::abs(c(0));
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index k = 0; k < p; ++k) M(0, k) = static_cast<double>(c(k));
  for (Eigen::Index k = 1; k < p; ++k) M(k, k - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  return Scalar(es.eigenvalues().cwiseAbs().maxCoeff());
}

template <typename Scalar>
std::vector<std::complex<double>> lag_roots_inverse(const VectorX<Scalar>& c) {
  // eigenvalues of the companion = inverse roots of 1 - sum c_k L^k
  const Eigen::Index p = c.size();
  std::vector<std::complex<double>> out;
  if (p == 0) return out;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index k = 0; k < p; ++k) M(0, k) = static_cast<double>(c(k));
  for (Eigen::Index k = 1; k < p; ++k) M(k, k - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  for (Eigen::Index i = 0; i < p; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

template <typename Scalar>
void check_arma(const ArmaParams<Scalar>& a) {
  if (!a.ar.allFinite() || !a.ma.allFinite()) throw NonInvertible("non-finite ARMA coefficient");
  const VectorX<Scalar> neg_ma = -a.ma;
  if (companion_radius<Scalar>(a.ar) >= Scalar(1 - kRootMargin))
    throw NonInvertible("AR polynomial has a root on or inside the unit circle");
  if (companion_radius<Scalar>(neg_ma) >= Scalar(1 - kRootMargin))
    throw NonInvertible("MA polynomial has a root on or inside the unit circle");
  if (a.p1() > 0 && a.p2() > 0) {
    const auto ra = lag_roots_inverse<Scalar>(a.ar);
    const auto rm = lag_roots_inverse<Scalar>(neg_ma);
    for (const auto& x : ra)
      for (const auto& y : rm)
        if (std::abs(x - y) <= 1e-6) throw NonInvertible("AR and MA polynomials share a root");
  }
}

// Largest inverse-root modulus of either polynomial; sets the decay rate
// of every weight sequence below.
template <typename Scalar>
Scalar arma_decay_radius(const ArmaParams<Scalar>& a) {
  const VectorX<Scalar> neg_ma = -a.ma;
  return std::max(companion_radius<Scalar>(a.ar), companion_radius<Scalar>(neg_ma));
}

// Smallest power of two >= min_N at which weights decaying like
// N^(2p+2) rho^N fall below tol; capped at max_N.
template <typename Scalar>
Eigen::Index truncation_length(const ArmaParams<Scalar>& a, Eigen::Index min_N = 2048,
                               Eigen::Index max_N = Eigen::Index(1) << 20, double tol = 1e-17) {
  const double rho = static_cast<double>(arma_decay_radius(a));
  Eigen::Index N = 1;
  while (N < min_N) N <<= 1;
  if (rho <= 0) return std::min(N, max_N);
  const double pw = 2.0 * double(a.p()) + 2.0;
  while (N < max_N && pw * std::log(double(N)) + double(N) * std::log(rho) > std::log(tol)) N <<= 1;
  return std::min(N, max_N);
}

namespace detail {

// phi-type recursion: y_n = f_n - sum_k ma_k y_{n-k}
template <typename Scalar>
void ma_inverse_inplace(const VectorX<Scalar>& ma, VectorX<Scalar>& y) {
  const Eigen::Index q = ma.size();
  for (Eigen::Index n = 0; n < y.size(); ++n) {
    Scalar acc = y(n);
    for (Eigen::Index k = 1; k <= q && k <= n; ++k) acc -= ma(k - 1) * y(n - k);
    y(n) = acc;
  }
}

}  // namespace detail

// phi(L) applied to a series with zero pre-sample values
template <typename Scalar>
VectorX<Scalar> apply_inverse_arma(const ArmaParams<Scalar>& a, const VectorX<Scalar>& z) {
  VectorX<Scalar> y = z;
  for (Eigen::Index n = 0; n < z.size(); ++n)
    for (Eigen::Index k = 1; k <= a.p1() && k <= n; ++k) y(n) -= a.ar(k - 1) * z(n - k);
  detail::ma_inverse_inplace(a.ma, y);
  return y;
}

// omega(L) applied to a series with zero pre-sample values
template <typename Scalar>
VectorX<Scalar> apply_arma(const ArmaParams<Scalar>& a, const VectorX<Scalar>& e) {
  const Eigen::Index T = e.size();
  VectorX<Scalar> u(T);
  for (Eigen::Index n = 0; n < T; ++n) {
    Scalar acc = e(n);
    for (Eigen::Index k = 1; k <= a.p2() && k <= n; ++k) acc += a.ma(k - 1) * e(n - k);
    for (Eigen::Index k = 1; k <= a.p1() && k <= n; ++k) acc += a.ar(k - 1) * u(n - k);
    u(n) = acc;
  }
  return u;
}

template <typename Scalar>
VectorX<Scalar> omega_weights(const ArmaParams<Scalar>& a, Eigen::Index N) {
  VectorX<Scalar> e = VectorX<Scalar>::Zero(N);
  if (N > 0) e(0) = 1;
  return apply_arma(a, e);
}

template <typename Scalar>
VectorX<Scalar> phi_weights(const ArmaParams<Scalar>& a, Eigen::Index N) {
  VectorX<Scalar> e = VectorX<Scalar>::Zero(N);
  if (N > 0) e(0) = 1;
  return apply_inverse_arma(a, e);
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dphi_weights(const ArmaParams<Scalar>& a,
                                                                   const VectorX<Scalar>& phi) {
  const Eigen::Index N = phi.size(), p1 = a.p1(), p = a.p();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> D(p, N);
  for (Eigen::Index k = 0; k < p; ++k) {
    VectorX<Scalar> f = VectorX<Scalar>::Zero(N);
    if (k < p1) {
      if (k + 1 < N) f(k + 1) = -1;
    } else {
      const Eigen::Index m = k - p1 + 1;
      for (Eigen::Index n = m; n < N; ++n) f(n) = -phi(n - m);
    }
    detail::ma_inverse_inplace(a.ma, f);
    D.row(k) = f.transpose();
  }
  return D;
}

template <typename Scalar>
std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> d2phi_analytic(
    const ArmaParams<Scalar>& a, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& D) {
  const Eigen::Index N = D.cols(), p1 = a.p1(), p = a.p();
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> out(
      p, Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(p, N));
  for (Eigen::Index k = 0; k < p; ++k)
    for (Eigen::Index j = 0; j < p; ++j) {
      if (k < p1 && j < p1) continue;  // beta(L) enters linearly
      VectorX<Scalar> f = VectorX<Scalar>::Zero(N);
      if (k >= p1) {
        const Eigen::Index m = k - p1 + 1;
        for (Eigen::Index n = m; n < N; ++n) f(n) -= D(j, n - m);
      }
      if (j >= p1) {
        const Eigen::Index m = j - p1 + 1;
        for (Eigen::Index n = m; n < N; ++n) f(n) -= D(k, n - m);
      }
      detail::ma_inverse_inplace(a.ma, f);
      out[k].row(j) = f.transpose();
    }
  return out;
}

template <typename Scalar>
std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> d2phi_numeric(
    const ArmaParams<Scalar>& a, Eigen::Index N, Scalar h = Scalar(1e-5)) {
  const Eigen::Index p = a.p();
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> out(p);
  const VectorX<Scalar> v = a.coeffs();
  for (Eigen::Index k = 0; k < p; ++k) {
    VectorX<Scalar> vp = v, vm = v;
    vp(k) += h;
    vm(k) -= h;
    const auto ap = ArmaParams<Scalar>::from_coeffs(vp, a.p1());
    const auto am = ArmaParams<Scalar>::from_coeffs(vm, a.p1());
    out[k] = (dphi_weights(ap, phi_weights(ap, N)) - dphi_weights(am, phi_weights(am, N))) /
             (Scalar(2) * h);
  }
  return out;
}

template <typename Scalar>
WeightTable<Scalar> expand_weights(const ArmaParams<Scalar>& a, Eigen::Index N,
                                   bool analytic_second = true) {
  check_arma(a);
  WeightTable<Scalar> w;
  w.p1 = a.p1();
  w.omega = omega_weights(a, N);
  w.phi = phi_weights(a, N);
  w.dphi = dphi_weights(a, w.phi);
  w.d2phi = analytic_second ? d2phi_analytic(a, w.dphi) : d2phi_numeric(a, N);
  return w;
}

template <typename Scalar>
BhCoeffs<Scalar> bh_coeffs(const WeightTable<Scalar>& w) {
  const Eigen::Index N = w.size(), p = w.p();
  BhCoeffs<Scalar> r;
  r.b1.resize(p, N);
  r.hd.resize(p, N);
  r.b2.assign(p, Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(p, N));
  const VectorX<Scalar> inv = dpi_zero<Scalar>(N).d1;
  for (Eigen::Index k = 0; k < p; ++k) {
    const VectorX<Scalar> dk = w.dphi.row(k).transpose();
    const VectorX<Scalar> bk = causal_conv<Scalar>(w.omega, dk);
    r.b1.row(k) = bk.transpose();
    r.hd.row(k) = causal_conv<Scalar>(inv, bk).transpose();
    for (Eigen::Index j = 0; j < p; ++j) {
      const VectorX<Scalar> dkj = w.d2phi[k].row(j).transpose();
      if (dkj.cwiseAbs().maxCoeff() == Scalar(0)) continue;
      r.b2[k].row(j) = causal_conv<Scalar>(w.omega, dkj).transpose();
    }
  }
  return r;
}

}  // namespace arfima
