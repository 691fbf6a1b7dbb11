#pragma once

#include <Eigen/Dense>
#include <string>

#include "arfima/arma_poly.hpp"

namespace arfima {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct ThetaParams {
  double d = 0.0;
  ArmaParams<double> arma;

  Index p() const { return arma.p(); }

  // (d, ar..., ma...)
  VectorXd vec() const {
    VectorXd v(1 + p());
    v(0) = d;
    v.tail(p()) = arma.coeffs();
    return v;
  }

  static ThetaParams from_vec(const VectorXd& v, Index p1) {
    ThetaParams t;
    t.d = v(0);
    t.arma = ArmaParams<double>::from_coeffs(v.tail(v.size() - 1), p1);
    return t;
  }

  static ThetaParams pure(double d) {
    ThetaParams t;
    t.d = d;
    t.arma.ar.resize(0);
    t.arma.ma.resize(0);
    return t;
  }

  static ThetaParams ar1(double d, double phi) {
    ThetaParams t = pure(d);
    t.arma.ar = VectorXd::Constant(1, phi);
    return t;
  }
};

enum class Deterministic { None, Constant, Trend };

struct ModelSpec {
  Index p1 = 0, p2 = 0;
  double d_lo = -5.0, d_hi = 5.0;
  double coef_bound = 0.9999;
  Deterministic det = Deterministic::Constant;
  // short-memory models keep d pinned at d_fixed
  bool fix_d = false;
  double d_fixed = 0.0;

  Index p() const { return p1 + p2; }
  Index n_free() const { return p() + (fix_d ? 0 : 1); }

  static ModelSpec centered(double center, Index p1 = 0, Index p2 = 0) {
    ModelSpec s;
    s.p1 = p1;
    s.p2 = p2;
    s.d_lo = center - 5.0;
    s.d_hi = center + 5.0;
    return s;
  }
};

struct ObjectiveKind {
  enum class Variant { CSS, CSS_KNOWN_MU, MCSS };
  Variant variant = Variant::CSS;
  double mu0 = 0.0;

  static ObjectiveKind css() { return {Variant::CSS, 0.0}; }
  static ObjectiveKind known_mu(double mu0) { return {Variant::CSS_KNOWN_MU, mu0}; }
  static ObjectiveKind mcss() { return {Variant::MCSS, 0.0}; }
};

std::string to_string(ObjectiveKind::Variant v);

}  // namespace arfima
