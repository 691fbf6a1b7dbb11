#pragma once

#include <vector>

#include "arfima/estimator.hpp"

namespace arfima {

struct BiasOptions {
  bool fix_d = false;               // short-memory model: d is not estimated
  double boundary_halfwidth = 0.01;
  bool use_AT_inverse = false;      // exact variant with A_T^{-1} in place of A^{-1}
  Index min_N = 2048;
  Index max_N = Index(1) << 20;
};

// Matrices entering the intrinsic bias. Index 0 is d unless fix_d.
struct BiasMatrices {
  MatrixXd A;       // limiting (approximate) or finite-T
  MatrixXd Aterm;   // matrix in the second Hadamard product
  std::vector<MatrixXd> F, G, C;
  Index N = 0;
  double tail = 0;
};

BiasMatrices bias_matrices_approx(const ArmaParams<double>& phi0, const BiasOptions& opt = {});
BiasMatrices bias_matrices_exact(const ArmaParams<double>& phi0, Index T, const BiasOptions& opt = {});

// T times the intrinsic bias given the matrices and the A^{-1} to use
VectorXd assemble_intrinsic(const BiasMatrices& m, const MatrixXd& Ainv);

// Returned vectors are biases (already divided by T).
VectorXd approx_score_bias(const ThetaParams& theta0, Index T, const BiasOptions& opt = {});
VectorXd approx_intrinsic_bias(const ArmaParams<double>& phi0, Index T, const BiasOptions& opt = {});
VectorXd exact_score_bias(const ThetaParams& theta0, Index T, const BiasOptions& opt = {});
VectorXd exact_intrinsic_bias(const ArmaParams<double>& phi0, Index T, const BiasOptions& opt = {});

// sum c_t D c_t / sum c_t^2 over an infinite horizon (d0 > 1/2)
VectorXd score_ratio_limit(const ThetaParams& theta0, bool fix_d);

struct BiasReport {
  Index T = 0;
  ThetaParams theta0;
  bool fix_d = false;
  bool exact = true;
  bool closed_form = false;
  VectorXd score_bias;          // primary variant
  VectorXd intrinsic_bias;      // primary variant
  VectorXd score_bias_approx;
  VectorXd intrinsic_bias_approx;
  VectorXd total_css, total_mu0, total_mcss;
  Index truncation_N = 0;
  double tail = 0;
};

BiasReport exact_bias(const ThetaParams& theta0, Index T, const BiasOptions& opt = {});
BiasReport approx_bias(const ThetaParams& theta0, Index T, const BiasOptions& opt = {});

enum class ClosedFormCase { ARFIMA0d0, ARFIMA1d0, ARMA_short, AR1 };

struct Arfima1d0Matrices {
  MatrixXd A, C01, C02, F1, F2, G1, G2;
};
Arfima1d0Matrices arfima1d0_matrices(double phi0);

BiasReport closed_form_bias(ClosedFormCase c, const ThetaParams& theta0, Index T);

// theta_m - B_T(phi_m); exact B_T unless exact = false
FitResult bcm_correct(const FitResult& fit_mcss, bool exact = true, const BiasOptions& opt = {});

struct BiasTableRow {
  double d0 = 0;
  Index T = 0;
  bool boundary = false;
  double css = 0, mu0 = 0, mcss = 0;  // d-component, x100
};

// General engine at (d0, phi0) for every d0 and T; approximate formulas.
std::vector<BiasTableRow> bias_table(const std::vector<Index>& T_list, const std::vector<double>& d0_list,
                                     const ArmaParams<double>& phi0 = {}, bool closed_form = false,
                                     const BiasOptions& opt = {});

}  // namespace arfima
