#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "arfima/objectives.hpp"

namespace arfima {

struct FitResult {
  ObjectiveKind kind;
  ModelSpec spec;
  Index T = 0;
  ThetaParams theta_hat;
  bool has_mu = true;
  double mu_hat = 0;     // level (absent for the known-level objective)
  VectorXd det_coef;     // all deterministic coefficients
  double sigma2_hat = 0;
  double objective = 0;
  MatrixXd cov;          // over the free parameters, (d, ar, ma) order
  VectorXd se;
  VectorXd t_stats;
  bool cov_ok = false;
  int n_starts = 0;
  int n_evals = 0;
  bool converged = false;
  bool at_boundary = false;
  bool bias_corrected = false;
};

struct EstimatorConfig {
  double d_step = 0.25;
  std::vector<double> coef_grid{-0.5, 0.0, 0.5};
  int n_starts = 4;          // Nelder-Mead legs launched from the best grid points
  double xtol = 1e-8;        // simplex diameter
  double ftol = 1e-12;       // relative objective spread
  int max_evals = 20000;     // per leg
  bool compute_cov = true;
  double hessian_step = 1e-4;
  bool sigma2_dof = false;   // divide by T-1 instead of T
  // When set, skip the grid and run one local leg from this point.
  std::optional<ThetaParams> start;
};

struct AsyMatrix {
  MatrixXd A;
  Index N = 0;
  double tail = 0;  // largest |b| among the last weights kept
};

struct NelderMeadResult {
  VectorXd x;
  double f = 0;
  int evals = 0;
  bool converged = false;
};

// Minimises f over R^n. x_scale maps a z-step into a parameter-space
// length for the diameter test.
NelderMeadResult nelder_mead(const std::function<double(const VectorXd&)>& f, const VectorXd& x0,
                             const VectorXd& step, double xtol, double ftol, int max_evals,
                             const std::function<double(const VectorXd&, const VectorXd&)>& dist);

FitResult estimate(const ObjectiveKind& kind, const ModelSpec& spec, const VectorXd& x,
                   const EstimatorConfig& cfg = {});

// sigma2 * H^{-1}, H the central-difference Hessian of the objective at theta
MatrixXd hessian_cov(const ObjectiveKind& kind, const ModelSpec& spec, const ThetaParams& theta,
                     const VectorXd& x, double step = 1e-4, bool sigma2_dof = false);

// Generic version on any function of the free-parameter vector.
MatrixXd numeric_hessian(const std::function<double(const VectorXd&)>& f, const VectorXd& x, double h);

AsyMatrix asy_matrix(const ArmaParams<double>& arma, Index N);
AsyMatrix asy_matrix(const ArmaParams<double>& arma);

// free-parameter vector <-> theta under a model spec
VectorXd free_params(const ModelSpec& spec, const ThetaParams& theta);
ThetaParams theta_from_free(const ModelSpec& spec, const VectorXd& v);

}  // namespace arfima
