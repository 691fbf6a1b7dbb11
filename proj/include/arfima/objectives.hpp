#pragma once

#include <optional>

#include "arfima/types.hpp"

namespace arfima {

struct ConvolutedCoeffs {
  VectorXd c;   // c(t-1) = c_t, t = 1..T
  MatrixXd dc;  // (p+1) x T, row 0 is the d-derivative
};

ConvolutedCoeffs conv_coeffs(const ThetaParams& theta, Index T);

// phi(L) Delta_+^d x
VectorXd filter_series(const ThetaParams& theta, const VectorXd& x);

VectorXd residuals(const ThetaParams& theta, double mu, const VectorXd& x);
double mu_hat(const ThetaParams& theta, const VectorXd& x);
double css_profile(const ThetaParams& theta, const VectorXd& x);
double css_known_mu(const ThetaParams& theta, double mu0, const VectorXd& x);
double mod_term(const ThetaParams& theta, Index T);
double mcss_objective(const ThetaParams& theta, const VectorXd& x);
double mod_term_trend(const ThetaParams& theta, Index T);
double sigma2_hat(const ThetaParams& theta, const VectorXd& x);

// Everything one objective evaluation produces.
struct ObjectiveValue {
  double value = 0;     // the minimised objective
  double profile = 0;   // L* (or L*_{mu0})
  double m = 1;         // modification term
  VectorXd coef;        // deterministic-term coefficients (level, trend)
};

// Evaluates an objective repeatedly on one series; caches the FFT of x.
class Objective {
 public:
  Objective(ObjectiveKind kind, Deterministic det, const VectorXd& x);

  ObjectiveValue evaluate(const ThetaParams& theta) const;
  double operator()(const ThetaParams& theta) const { return evaluate(theta).value; }

  Index size() const { return T_; }
  const ObjectiveKind& kind() const { return kind_; }
  Deterministic det() const { return det_; }

 private:
  ObjectiveKind kind_;
  Deterministic det_;
  Index T_;
  FracDiffer<double> diff_;
};

}  // namespace arfima
