#pragma once

#include <cmath>
#include <numbers>

#include "arfima/errors.hpp"

namespace arfima {

namespace constants {
inline constexpr double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
inline constexpr double zeta3 = 1.2020569031595942854;
inline constexpr double euler_gamma = std::numbers::egamma;
}  // namespace constants

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// Psi(x) by upward recurrence to x >= 10 then the asymptotic series;
// reflection for negative arguments.
template <typename Scalar>
Scalar digamma(Scalar x) {
  using std::log;
  using std::tan;
  if (is_nonpositive_integer(static_cast<double>(x)))
    throw DomainError("digamma: pole at non-positive integer");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  if (x < Scalar(0)) return digamma(Scalar(1) - x) - pi / tan(pi * x);
  Scalar acc = 0;
  while (x < Scalar(10)) {
    acc -= Scalar(1) / x;
    x += Scalar(1);
  }
  const Scalar r = Scalar(1) / (x * x);
  // B_2k / (2k) for k = 1..7
  const Scalar series =
      r * (Scalar(1) / 12 -
           r * (Scalar(1) / 120 -
                r * (Scalar(1) / 252 -
                     r * (Scalar(1) / 240 -
                          r * (Scalar(1) / 132 -
                               r * (Scalar(691) / 32760 - r * (Scalar(1) / 12)))))));
  return acc + log(x) - Scalar(0.5) / x - series;
}

namespace detail {
template <typename Scalar>
Scalar dilog_series(Scalar x) {
  Scalar sum = 0, term = x;
  for (int k = 1; k < 200; ++k) {
    const Scalar add = term / Scalar(k * k);
    sum += add;
    if (std::abs(add) < Scalar(1e-18) * std::abs(sum)) break;
    term *= x;
  }
  return sum;
}
}  // namespace detail

// Spence's dilogarithm Li2(x) = -int_0^x log(1-t)/t dt for real x <= 1.
template <typename Scalar>
Scalar dilog(Scalar x) {
  using std::log;
  const Scalar z2 = Scalar(constants::zeta2);
  if (x > Scalar(1)) throw DomainError("dilog: argument above 1");
  if (x == Scalar(1)) return z2;
  if (x == Scalar(0)) return 0;
  if (x < Scalar(-1)) {
    const Scalar l = log(-x);
    return -z2 - Scalar(0.5) * l * l - dilog(Scalar(1) / x);
  }
  if (x < Scalar(-0.5)) {
    // Landen: maps [-1, -0.5) onto (1/3, 1/2]
    const Scalar l = log(Scalar(1) - x);
    return -detail::dilog_series(x / (x - Scalar(1))) - Scalar(0.5) * l * l;
  }
  if (x <= Scalar(0.5)) return detail::dilog_series(x);
  return z2 - log(x) * log(Scalar(1) - x) - detail::dilog_series(Scalar(1) - x);
}

// Sign of Gamma(x) for x not a pole.
inline int gamma_sign(double x) {
  if (x > 0) return 1;
  return (static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
}

// Generalised binomial Gamma(top+1) / (Gamma(bottom+1) Gamma(top-bottom+1)).
template <typename Scalar>
Scalar gen_binom(Scalar top, Scalar bottom) {
  const double a = static_cast<double>(top) + 1;
  const double b = static_cast<double>(bottom) + 1;
  const double c = static_cast<double>(top - bottom) + 1;
  if (is_nonpositive_integer(a)) throw DomainError("gen_binom: pole in numerator");
  // a finite numerator over an infinite denominator gives zero
  if (is_nonpositive_integer(b) || is_nonpositive_integer(c)) return Scalar(0);
  using std::lgamma;
  const Scalar lg = lgamma(Scalar(a)) - lgamma(Scalar(b)) - lgamma(Scalar(c));
  const int sign = gamma_sign(a) * gamma_sign(b) * gamma_sign(c);
  return Scalar(sign) * std::exp(lg);
}

}  // namespace arfima
