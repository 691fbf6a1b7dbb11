#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arfima/bias.hpp"

namespace arfima {

struct DgpSpec {
  ThetaParams theta0;
  double mu0 = 0.0;
  double sigma0 = 1.0;
  Index T = 64;
};

// splitmix64 finaliser chained over the words
std::uint64_t seed_hash(std::uint64_t base, std::uint64_t cell, std::uint64_t rep);

VectorXd gaussian_innovations(Index T, double sigma, std::uint64_t seed);

// x = mu0 I(t>=1) + Delta_+^{-d0} omega(L) eps, zero pre-sample values
VectorXd simulate_path(const DgpSpec& spec, const VectorXd& eps);
VectorXd simulate_path(const DgpSpec& spec, std::uint64_t seed);

enum class McEstimator { CSS, CSS_KNOWN_MU, MCSS, BCM };
std::string to_string(McEstimator e);
McEstimator mc_estimator_from_string(const std::string& s);

// Grid: full multi-start per replication. Truth: one local leg started at the DGP value.
enum class McStart { Grid, Truth };
std::string to_string(McStart s);
McStart mc_start_from_string(const std::string& s);

struct McCell {
  double d0 = 0;
  ArmaParams<double> phi0;
  Index T = 64;
};

struct McConfig {
  std::vector<double> d0_list{0.4};
  std::vector<ArmaParams<double>> phi0_list{ArmaParams<double>{}};
  std::vector<Index> T_list{64};
  std::vector<McEstimator> estimators{McEstimator::CSS, McEstimator::MCSS, McEstimator::BCM};
  int R = 100;
  std::uint64_t base_seed = 20240601;
  int workers = 0;  // 0: hardware concurrency
  double mu0 = 0.0;
  double sigma0 = 1.0;
  double box_halfwidth = 5.0;
  bool bcm_exact = true;
  McStart start = McStart::Grid;
  EstimatorConfig est = [] {
    EstimatorConfig e;
    e.compute_cov = false;
    return e;
  }();
};

struct McStats {
  VectorXd bias;   // mean(theta_hat - theta0)
  VectorXd mse;    // mean((theta_hat - theta0)^2)
  VectorXd se;     // standard error of the mean error
  int n_ok = 0;
  int n_fail = 0;
};

struct McCellResult {
  McCell cell;
  std::map<McEstimator, McStats> stats;
};

struct McResult {
  int R = 0;
  std::uint64_t base_seed = 0;
  std::vector<McCellResult> cells;
};

void validate(const McConfig& cfg);
McResult run_mc(const McConfig& cfg);

}  // namespace arfima
