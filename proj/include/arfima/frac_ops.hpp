#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>
#include <vector>

#include "arfima/errors.hpp"
#include "arfima/special_fn.hpp"

namespace arfima {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// below this length the direct convolution beats the FFT path
inline constexpr Eigen::Index kFftThreshold = 128;

// pi_i(a), i = 0..n-1: coefficients of (1 - L)^{-a}
template <typename Scalar>
VectorX<Scalar> pi_coeffs(Scalar a, Eigen::Index n) {
  VectorX<Scalar> c(n);
  if (n == 0) return c;
  c(0) = Scalar(1);
  for (Eigen::Index i = 1; i < n; ++i)
    c(i) = (Scalar(i - 1) + a) * c(i - 1) / Scalar(i);
  return c;
}

// Test oracle: Gamma(j+a) / (Gamma(a) Gamma(j+1)).
inline double pi_coeffs_gamma(double a, long j) {
  if (is_nonpositive_integer(a)) throw DomainError("pi_coeffs_gamma: a is a non-positive integer");
  if (j == 0) return 1.0;
  const double ja = static_cast<double>(j) + a;
  if (is_nonpositive_integer(ja)) return 0.0;
  const double lg = std::lgamma(ja) - std::lgamma(a) - std::lgamma(double(j) + 1.0);
  return gamma_sign(ja) * gamma_sign(a) * std::exp(lg);
}

// Derivative of pi_j(a) in a, by the differentiated recursion.
template <typename Scalar>
VectorX<Scalar> dpi_coeffs(Scalar a, Eigen::Index n) {
  VectorX<Scalar> p(n), dp(n);
  if (n == 0) return dp;
  p(0) = Scalar(1);
  dp(0) = Scalar(0);
  for (Eigen::Index j = 1; j < n; ++j) {
    p(j) = (Scalar(j - 1) + a) * p(j - 1) / Scalar(j);
    dp(j) = ((Scalar(j - 1) + a) * dp(j - 1) + p(j - 1)) / Scalar(j);
  }
  return dp;
}

template <typename Scalar>
struct KappaSeries {
  // k0(t-1) = kappa_{0t}(d) = pi_{t-1}(1-d), k1 its d-derivative, t = 1..T
  VectorX<Scalar> k0, k1;
};

template <typename Scalar>
KappaSeries<Scalar> kappa_series(Scalar d, Eigen::Index T) {
  KappaSeries<Scalar> k;
  k.k0 = pi_coeffs<Scalar>(Scalar(1) - d, T);
  k.k1 = -dpi_coeffs<Scalar>(Scalar(1) - d, T);
  return k;
}

template <typename Scalar>
struct DPiZero {
  VectorX<Scalar> d1;  // D_d pi_j(0) = 1/j
  VectorX<Scalar> d2;  // D_dd pi_j(0) = 2 a_{j-1} / j, a_j harmonic numbers
};

template <typename Scalar>
DPiZero<Scalar> dpi_zero(Eigen::Index n) {
  DPiZero<Scalar> r;
  r.d1 = VectorX<Scalar>::Zero(n);
  r.d2 = VectorX<Scalar>::Zero(n);
  Scalar harm = 0;  // a_{j-1}
  for (Eigen::Index j = 1; j < n; ++j) {
    r.d1(j) = Scalar(1) / Scalar(j);
    r.d2(j) = Scalar(2) * harm / Scalar(j);
    harm += Scalar(1) / Scalar(j);
  }
  return r;
}

// y_t = sum_{i<t} w_i x_{t-i}, truncated causal convolution
template <typename Scalar>
VectorX<Scalar> causal_conv_naive(const VectorX<Scalar>& w, const VectorX<Scalar>& x) {
  const Eigen::Index T = x.size();
  VectorX<Scalar> y = VectorX<Scalar>::Zero(T);
  const Eigen::Index nw = std::min<Eigen::Index>(w.size(), T);
  for (Eigen::Index t = 0; t < T; ++t) {
    Scalar acc = 0;
    const Eigen::Index m = std::min<Eigen::Index>(t + 1, nw);
    for (Eigen::Index i = 0; i < m; ++i) acc += w(i) * x(t - i);
    y(t) = acc;
  }
  return y;
}

// kissfft does not handle a length-1 transform
inline Eigen::Index fft_size(Eigen::Index T) {
  Eigen::Index n = 2;
  while (n < 2 * T - 1) n <<= 1;
  return n;
}

template <typename Scalar>
VectorX<Scalar> causal_conv_fft(const VectorX<Scalar>& w, const VectorX<Scalar>& x) {
  const Eigen::Index T = x.size();
  if (T == 0) return x;
  const Eigen::Index n = fft_size(T);
  std::vector<Scalar> a(n, Scalar(0)), b(n, Scalar(0));
  for (Eigen::Index i = 0; i < T; ++i) a[i] = x(i);
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(T, w.size()); ++i) b[i] = w(i);
  Eigen::FFT<Scalar> fft;
  std::vector<std::complex<Scalar>> fa, fb;
  fft.fwd(fa, a);
  fft.fwd(fb, b);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  std::vector<Scalar> out;
  fft.inv(out, fa);
  VectorX<Scalar> y(T);
  for (Eigen::Index i = 0; i < T; ++i) y(i) = out[i];
  return y;
}

template <typename Scalar>
VectorX<Scalar> causal_conv(const VectorX<Scalar>& w, const VectorX<Scalar>& x) {
  return x.size() >= kFftThreshold ? causal_conv_fft(w, x) : causal_conv_naive(w, x);
}

// Delta_+^d x
template <typename Scalar>
VectorX<Scalar> fracdiff_naive(const VectorX<Scalar>& x, Scalar d) {
  return causal_conv_naive<Scalar>(pi_coeffs<Scalar>(-d, x.size()), x);
}

template <typename Scalar>
VectorX<Scalar> fracdiff_fft(const VectorX<Scalar>& x, Scalar d) {
  return causal_conv_fft<Scalar>(pi_coeffs<Scalar>(-d, x.size()), x);
}

template <typename Scalar>
VectorX<Scalar> fracdiff(const VectorX<Scalar>& x, Scalar d) {
  return x.size() >= kFftThreshold ? fracdiff_fft(x, d) : fracdiff_naive(x, d);
}

// Repeated fractional differencing of one fixed series: the transform of
// x is computed once and reused for every d.
template <typename Scalar>
class FracDiffer {
 public:
  explicit FracDiffer(const VectorX<Scalar>& x) : x_(x) {
    if (x_.size() >= kFftThreshold) {
      n_ = fft_size(x_.size());
      std::vector<Scalar> a(n_, Scalar(0));
      for (Eigen::Index i = 0; i < x_.size(); ++i) a[i] = x_(i);
      fft_.fwd(fx_, a);
    }
  }

  VectorX<Scalar> operator()(Scalar d) const {
    const Eigen::Index T = x_.size();
    if (T < kFftThreshold) return fracdiff_naive(x_, d);
    std::vector<Scalar> b(n_, Scalar(0));
    const VectorX<Scalar> w = pi_coeffs<Scalar>(-d, T);
    for (Eigen::Index i = 0; i < T; ++i) b[i] = w(i);
    std::vector<std::complex<Scalar>> fb;
    fft_.fwd(fb, b);
    for (std::size_t i = 0; i < fb.size(); ++i) fb[i] *= fx_[i];
    std::vector<Scalar> out;
    fft_.inv(out, fb);
    VectorX<Scalar> y(T);
    for (Eigen::Index i = 0; i < T; ++i) y(i) = out[i];
    return y;
  }

  const VectorX<Scalar>& series() const { return x_; }

 private:
  VectorX<Scalar> x_;
  Eigen::Index n_ = 0;
  std::vector<std::complex<Scalar>> fx_;
  mutable Eigen::FFT<Scalar> fft_;
};

}  // namespace arfima
