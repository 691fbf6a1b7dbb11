#include "arfima/objectives.hpp"

#include <cmath>

namespace arfima {

std::string to_string(ObjectiveKind::Variant v) {
  switch (v) {
    case ObjectiveKind::Variant::CSS: return "css";
    case ObjectiveKind::Variant::CSS_KNOWN_MU: return "css-mu0";
    case ObjectiveKind::Variant::MCSS: return "mcss";
  }
  return "?";
}

namespace {

// -L^m z / alpha(L), the phi-derivative of phi(L) applied to something
VectorXd shifted_ma_inverse(const VectorXd& ma, const VectorXd& z, Index m) {
  const Index T = z.size();
  VectorXd f = VectorXd::Zero(T);
  if (m < T) f.tail(T - m) = -z.head(T - m);
  detail::ma_inverse_inplace(ma, f);
  return f;
}

struct Regression {
  VectorXd coef;
  double ssr = 0;
  double logdet = 0;  // log det(Z'Z)
};

Regression regress(const VectorXd& y, const MatrixXd& Z) {
  Regression r;
  if (Z.cols() == 0) {
    r.ssr = y.squaredNorm();
    return r;
  }
  const MatrixXd G = Z.transpose() * Z;
  Eigen::LLT<MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) throw SingularGram("Gram matrix of deterministic terms is singular");
  const MatrixXd L = llt.matrixL();
  for (Index i = 0; i < L.rows(); ++i) {
    if (!(L(i, i) > 0)) throw SingularGram("Gram matrix of deterministic terms is singular");
    r.logdet += 2.0 * std::log(L(i, i));
  }
  if (Z.cols() == 1 && G(0, 0) < 1e-300) throw DegenerateLevel("sum of squared convoluted coefficients vanishes");
  r.coef = llt.solve(Z.transpose() * y);
  r.ssr = (y - Z * r.coef).squaredNorm();
  return r;
}

MatrixXd det_columns(const ThetaParams& theta, Deterministic det, Index T) {
  const Index k = det == Deterministic::None ? 0 : det == Deterministic::Constant ? 1 : 2;
  MatrixXd Z(T, k);
  if (k >= 1) Z.col(0) = apply_inverse_arma(theta.arma, pi_coeffs<double>(1.0 - theta.d, T));
  // Delta_+^d t = pi_{t-1}(2-d)
  if (k >= 2) Z.col(1) = apply_inverse_arma(theta.arma, pi_coeffs<double>(2.0 - theta.d, T));
  return Z;
}

}  // namespace

ConvolutedCoeffs conv_coeffs(const ThetaParams& theta, Index T) {
  check_arma(theta.arma);
  const auto kap = kappa_series<double>(theta.d, T);
  const auto& a = theta.arma;
  ConvolutedCoeffs out;
  out.c = apply_inverse_arma(a, kap.k0);
  out.dc.resize(1 + a.p(), T);
  out.dc.row(0) = apply_inverse_arma(a, kap.k1).transpose();
  for (Index k = 0; k < a.p1(); ++k)
    out.dc.row(1 + k) = shifted_ma_inverse(a.ma, kap.k0, k + 1).transpose();
  for (Index k = 0; k < a.p2(); ++k)
    out.dc.row(1 + a.p1() + k) = shifted_ma_inverse(a.ma, out.c, k + 1).transpose();
  return out;
}

VectorXd filter_series(const ThetaParams& theta, const VectorXd& x) {
  check_arma(theta.arma);
  return apply_inverse_arma(theta.arma, fracdiff<double>(x, theta.d));
}

VectorXd residuals(const ThetaParams& theta, double mu, const VectorXd& x) {
  const VectorXd y = filter_series(theta, x);
  return y - mu * apply_inverse_arma(theta.arma, pi_coeffs<double>(1.0 - theta.d, x.size()));
}

double mu_hat(const ThetaParams& theta, const VectorXd& x) {
  const VectorXd y = filter_series(theta, x);
  const VectorXd c = apply_inverse_arma(theta.arma, pi_coeffs<double>(1.0 - theta.d, x.size()));
  const double cc = c.squaredNorm();
  if (cc < 1e-300) throw DegenerateLevel("sum of squared convoluted coefficients vanishes");
  return y.dot(c) / cc;
}

double css_profile(const ThetaParams& theta, const VectorXd& x) {
  return Objective(ObjectiveKind::css(), Deterministic::Constant, x).evaluate(theta).profile;
}

double css_known_mu(const ThetaParams& theta, double mu0, const VectorXd& x) {
  return Objective(ObjectiveKind::known_mu(mu0), Deterministic::Constant, x).evaluate(theta).value;
}

double mod_term(const ThetaParams& theta, Index T) {
  if (T < 2) throw DomainError("mod_term needs T >= 2");
  check_arma(theta.arma);
  const VectorXd c = apply_inverse_arma(theta.arma, pi_coeffs<double>(1.0 - theta.d, T));
  return std::exp(std::log(c.squaredNorm()) / double(T - 1));
}

double mod_term_trend(const ThetaParams& theta, Index T) {
  if (T < 3) throw DomainError("mod_term_trend needs T >= 3");
  check_arma(theta.arma);
  const MatrixXd Z = det_columns(theta, Deterministic::Trend, T);
  const double logdet = regress(VectorXd::Zero(T), Z).logdet;
  return std::exp(logdet / double(T - 2));
}

double mcss_objective(const ThetaParams& theta, const VectorXd& x) {
  return Objective(ObjectiveKind::mcss(), Deterministic::Constant, x).evaluate(theta).value;
}

double sigma2_hat(const ThetaParams& theta, const VectorXd& x) {
  return 2.0 * css_profile(theta, x) / double(x.size());
}

Objective::Objective(ObjectiveKind kind, Deterministic det, const VectorXd& x)
    : kind_(kind), det_(det), T_(x.size()), diff_(x) {
  if (T_ < 2) throw DomainError("series too short");
  if (!x.allFinite()) throw NonFinite("series contains NaN or Inf");
  if (kind_.variant == ObjectiveKind::Variant::CSS_KNOWN_MU && det_ != Deterministic::Constant)
    throw ConfigError("known-level objective requires a constant deterministic term");
}

ObjectiveValue Objective::evaluate(const ThetaParams& theta) const {
  check_arma(theta.arma);
  ObjectiveValue v;
  VectorXd y = apply_inverse_arma(theta.arma, diff_(theta.d));
  if (kind_.variant == ObjectiveKind::Variant::CSS_KNOWN_MU) {
    const VectorXd c = apply_inverse_arma(theta.arma, pi_coeffs<double>(1.0 - theta.d, T_));
    v.profile = 0.5 * (y - kind_.mu0 * c).squaredNorm();
    v.coef = VectorXd::Constant(1, kind_.mu0);
    v.value = v.profile;
    return v;
  }
  const MatrixXd Z = det_columns(theta, det_, T_);
  const Regression r = regress(y, Z);
  v.profile = 0.5 * r.ssr;
  v.coef = r.coef;
  if (kind_.variant == ObjectiveKind::Variant::MCSS)
    v.m = std::exp(r.logdet / double(T_ - Z.cols()));
  v.value = v.m * v.profile;
  if (!std::isfinite(v.value)) throw NonFinite("objective is not finite");
  return v;
}

}  // namespace arfima
