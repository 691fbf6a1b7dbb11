#include "arfima/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace arfima {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Neumaier-compensated running sum
struct KahanSum {
  double sum = 0, comp = 0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

std::uint64_t seed_hash(std::uint64_t base, std::uint64_t cell, std::uint64_t rep) {
  return splitmix(splitmix(splitmix(base) ^ cell) ^ rep);
}

VectorXd gaussian_innovations(Index T, double sigma, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, sigma);
  VectorXd e(T);
  for (Index t = 0; t < T; ++t) e(t) = nd(gen);
  return e;
}

VectorXd simulate_path(const DgpSpec& spec, const VectorXd& eps) {
  check_arma(spec.theta0.arma);
  const VectorXd u = apply_arma(spec.theta0.arma, eps);
  return (fracdiff<double>(u, -spec.theta0.d).array() + spec.mu0).matrix();
}

VectorXd simulate_path(const DgpSpec& spec, std::uint64_t seed) {
  if (!(spec.sigma0 > 0)) throw ConfigError("sigma0 must be positive");
  return simulate_path(spec, gaussian_innovations(spec.T, spec.sigma0, seed));
}

std::string to_string(McEstimator e) {
  switch (e) {
    case McEstimator::CSS: return "css";
    case McEstimator::CSS_KNOWN_MU: return "css-mu0";
    case McEstimator::MCSS: return "mcss";
    case McEstimator::BCM: return "bcm";
  }
  return "?";
}

McEstimator mc_estimator_from_string(const std::string& s) {
  if (s == "css") return McEstimator::CSS;
  if (s == "css-mu0" || s == "mu0") return McEstimator::CSS_KNOWN_MU;
  if (s == "mcss") return McEstimator::MCSS;
  if (s == "bcm") return McEstimator::BCM;
  throw ConfigError("unknown estimator '" + s + "'");
}

std::string to_string(McStart s) { return s == McStart::Grid ? "grid" : "truth"; }

McStart mc_start_from_string(const std::string& s) {
  if (s == "grid") return McStart::Grid;
  if (s == "truth") return McStart::Truth;
  throw ConfigError("unknown start policy: " + s);
}

void validate(const McConfig& cfg) {
  if (cfg.R < 1) throw ConfigError("replications must be at least 1");
  if (cfg.d0_list.empty() || cfg.phi0_list.empty() || cfg.T_list.empty())
    throw ConfigError("Monte Carlo grid is empty");
  if (cfg.estimators.empty()) throw ConfigError("no estimators selected");
  if (!(cfg.sigma0 > 0)) throw ConfigError("sigma0 must be positive");
  for (Index T : cfg.T_list)
    if (T < 8) throw ConfigError("T must be at least 8");
  for (const auto& a : cfg.phi0_list) check_arma(a);
}

McResult run_mc(const McConfig& cfg) {
  validate(cfg);
  McResult res;
  res.R = cfg.R;
  res.base_seed = cfg.base_seed;
  int workers = cfg.workers > 0 ? cfg.workers : int(std::max(1u, std::thread::hardware_concurrency()));

  const bool want_mcss = std::count(cfg.estimators.begin(), cfg.estimators.end(), McEstimator::MCSS) ||
                         std::count(cfg.estimators.begin(), cfg.estimators.end(), McEstimator::BCM);

  std::uint64_t cell_id = 0;
  for (const auto& phi0 : cfg.phi0_list)
    for (double d0 : cfg.d0_list)
      for (Index T : cfg.T_list) {
        McCell cell{d0, phi0, T};
        ThetaParams th0;
        th0.d = d0;
        th0.arma = phi0;
        const VectorXd v0 = th0.vec();
        const Index n = v0.size();
        ModelSpec spec = ModelSpec::centered(d0, phi0.p1(), phi0.p2());
        spec.d_lo = d0 - cfg.box_halfwidth;
        spec.d_hi = d0 + cfg.box_halfwidth;
        DgpSpec dgp{th0, cfg.mu0, cfg.sigma0, T};
        EstimatorConfig est = cfg.est;
        if (cfg.start == McStart::Truth) est.start = th0;

        // errors[e][r] is empty on failure
        std::map<McEstimator, std::vector<VectorXd>> errors;
        for (auto e : cfg.estimators) errors[e].assign(cfg.R, VectorXd());

        const std::uint64_t cid = cell_id++;
        std::atomic<int> next{0};
        auto work = [&]() {
          while (true) {
            const int r = next.fetch_add(1);
            if (r >= cfg.R) break;
            const VectorXd x = simulate_path(dgp, seed_hash(cfg.base_seed, cid, std::uint64_t(r)));
            FitResult mfit;
            bool mfit_ok = false;
            if (want_mcss) {
              try {
                mfit = estimate(ObjectiveKind::mcss(), spec, x, est);
                mfit_ok = !mfit.at_boundary;
              } catch (const Error&) {
              }
            }
            for (auto e : cfg.estimators) {
              try {
                VectorXd err;
                if (e == McEstimator::MCSS) {
                  if (mfit_ok) err = mfit.theta_hat.vec() - v0;
                } else if (e == McEstimator::BCM) {
                  if (mfit_ok) err = bcm_correct(mfit, cfg.bcm_exact).theta_hat.vec() - v0;
                } else {
                  const ObjectiveKind k =
                      e == McEstimator::CSS ? ObjectiveKind::css() : ObjectiveKind::known_mu(cfg.mu0);
                  const FitResult f = estimate(k, spec, x, est);
                  if (!f.at_boundary) err = f.theta_hat.vec() - v0;
                }
                errors.at(e)[r] = err;
              } catch (const Error&) {
              }
            }
          }
        };
        std::vector<std::thread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();

        McCellResult cr;
        cr.cell = cell;
        for (auto e : cfg.estimators) {
          std::vector<KahanSum> s1(n), s2(n);
          McStats st;
          for (int r = 0; r < cfg.R; ++r) {
            const VectorXd& err = errors.at(e)[r];
            if (err.size() == 0) {
              ++st.n_fail;
              continue;
            }
            ++st.n_ok;
            for (Index i = 0; i < n; ++i) {
              s1[i].add(err(i));
              s2[i].add(err(i) * err(i));
            }
          }
          st.bias = VectorXd::Constant(n, std::nan(""));
          st.mse = st.bias;
          st.se = st.bias;
          if (st.n_ok > 0) {
            for (Index i = 0; i < n; ++i) {
              const double m1 = s1[i].value() / st.n_ok, m2 = s2[i].value() / st.n_ok;
              st.bias(i) = m1;
              st.mse(i) = m2;
              st.se(i) = st.n_ok > 1 ? std::sqrt(std::max(0.0, m2 - m1 * m1) * st.n_ok / (st.n_ok - 1) / st.n_ok) : 0.0;
            }
          }
          cr.stats[e] = st;
        }
        res.cells.push_back(cr);
      }
  return res;
}

}  // namespace arfima
