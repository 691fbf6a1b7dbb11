#include "arfima/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace arfima {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
  VectorXd lo, hi;
};

Box make_box(const ModelSpec& s) {
  const Index n = s.n_free();
  Box b{VectorXd(n), VectorXd(n)};
  Index i = 0;
  if (!s.fix_d) {
    b.lo(0) = s.d_lo;
    b.hi(0) = s.d_hi;
    i = 1;
  }
  for (; i < n; ++i) {
    b.lo(i) = -s.coef_bound;
    b.hi(i) = s.coef_bound;
  }
  return b;
}

VectorXd to_box(const Box& b, const VectorXd& z) {
  VectorXd v(z.size());
  for (Index i = 0; i < z.size(); ++i) v(i) = b.lo(i) + (b.hi(i) - b.lo(i)) / (1.0 + std::exp(-z(i)));
  return v;
}

VectorXd from_box(const Box& b, const VectorXd& v) {
  VectorXd z(v.size());
  for (Index i = 0; i < v.size(); ++i) z(i) = std::log((v(i) - b.lo(i)) / (b.hi(i) - v(i)));
  return z;
}

// dtheta/dz at z
VectorXd box_slope(const Box& b, const VectorXd& z) {
  VectorXd s(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    const double e = 1.0 / (1.0 + std::exp(-z(i)));
    s(i) = (b.hi(i) - b.lo(i)) * e * (1.0 - e);
  }
  return s;
}

bool lex_less(const VectorXd& a, const VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

VectorXd free_params(const ModelSpec& spec, const ThetaParams& theta) {
  if (spec.fix_d) return theta.arma.coeffs();
  return theta.vec();
}

ThetaParams theta_from_free(const ModelSpec& spec, const VectorXd& v) {
  if (!spec.fix_d) return ThetaParams::from_vec(v, spec.p1);
  VectorXd full(1 + v.size());
  full(0) = spec.d_fixed;
  full.tail(v.size()) = v;
  return ThetaParams::from_vec(full, spec.p1);
}

NelderMeadResult nelder_mead(const std::function<double(const VectorXd&)>& f, const VectorXd& x0,
                             const VectorXd& step, double xtol, double ftol, int max_evals,
                             const std::function<double(const VectorXd&, const VectorXd&)>& dist) {
  const Index n = x0.size();
  std::vector<VectorXd> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  NelderMeadResult res;
  auto eval = [&](const VectorXd& x) {
    ++res.evals;
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  };
  fs[0] = eval(x0);
  for (Index i = 0; i < n; ++i) {
    xs[i + 1](i) += step(i);
    fs[i + 1] = eval(xs[i + 1]);
  }
  std::vector<Index> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return fs[a] < fs[b]; });
    {
      std::vector<VectorXd> x2;
      std::vector<double> f2;
      for (Index i : order) {
        x2.push_back(xs[i]);
        f2.push_back(fs[i]);
      }
      xs.swap(x2);
      fs.swap(f2);
    }
    double diam = 0;
    for (Index i = 1; i <= n; ++i) diam = std::max(diam, dist(xs[i], xs[0]));
    const double spread = fs[n] - fs[0];
    if (std::isfinite(fs[0]) && diam < xtol && spread <= ftol * std::abs(fs[0])) {
      res.converged = true;
      break;
    }
    if (res.evals >= max_evals) break;

    VectorXd c = VectorXd::Zero(n);
    for (Index i = 0; i < n; ++i) c += xs[i];
    c /= double(n);
    const VectorXd xr = c + (c - xs[n]);
    const double fr = eval(xr);
    if (fr < fs[0]) {
      const VectorXd xe = c + 2.0 * (c - xs[n]);
      const double fe = eval(xe);
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
      continue;
    }
    if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
      continue;
    }
    bool shrink = false;
    if (fr < fs[n]) {
      const VectorXd xc = c + 0.5 * (xr - c);
      const double fc = eval(xc);
      if (fc <= fr) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        shrink = true;
      }
    } else {
      const VectorXd xc = c + 0.5 * (xs[n] - c);
      const double fc = eval(xc);
      if (fc < fs[n]) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (Index i = 1; i <= n; ++i) {
        xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
        fs[i] = eval(xs[i]);
      }
    }
  }
  res.x = xs[0];
  res.f = fs[0];
  return res;
}

MatrixXd numeric_hessian(const std::function<double(const VectorXd&)>& f, const VectorXd& x, double h) {
  const Index n = x.size();
  VectorXd hs(n);
  for (Index i = 0; i < n; ++i) hs(i) = h * std::max(1.0, std::abs(x(i)));
  const double f0 = f(x);
  MatrixXd H(n, n);
  for (Index i = 0; i < n; ++i) {
    VectorXd xp = x, xm = x;
    xp(i) += hs(i);
    xm(i) -= hs(i);
    H(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (hs(i) * hs(i));
    for (Index j = 0; j < i; ++j) {
      VectorXd a = x, b = x, c = x, d = x;
      a(i) += hs(i); a(j) += hs(j);
      b(i) += hs(i); b(j) -= hs(j);
      c(i) -= hs(i); c(j) += hs(j);
      d(i) -= hs(i); d(j) -= hs(j);
      H(i, j) = H(j, i) = (f(a) - f(b) - f(c) + f(d)) / (4.0 * hs(i) * hs(j));
    }
  }
  return 0.5 * (H + H.transpose());
}

MatrixXd hessian_cov(const ObjectiveKind& kind, const ModelSpec& spec, const ThetaParams& theta,
                     const VectorXd& x, double step, bool sigma2_dof) {
  const Objective obj(kind, spec.det, x);
  auto f = [&](const VectorXd& v) { return obj(theta_from_free(spec, v)); };
  const MatrixXd H = numeric_hessian(f, free_params(spec, theta), step);
  if (!H.allFinite()) throw SingularHessian("Hessian has non-finite entries");
  Eigen::LDLT<MatrixXd> ldlt(H);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0)
    throw SingularHessian("Hessian is not positive definite");
  const ObjectiveValue ov = obj.evaluate(theta);
  const double s2 = 2.0 * ov.profile / double(x.size() - (sigma2_dof ? 1 : 0));
  MatrixXd cov = s2 * ldlt.solve(MatrixXd::Identity(H.rows(), H.cols()));
  return 0.5 * (cov + cov.transpose());
}

FitResult estimate(const ObjectiveKind& kind, const ModelSpec& spec, const VectorXd& x,
                   const EstimatorConfig& cfg) {
  const Index T = x.size();
  if (!x.allFinite()) throw NonFinite("series contains NaN or Inf");
  if (T <= spec.p() + 2) throw DomainError("series too short for the requested model");
  if (!(spec.d_lo < spec.d_hi) || !(spec.coef_bound > 0)) throw ConfigError("empty parameter box");

  const Objective obj(kind, spec.det, x);
  const Box box = make_box(spec);
  const Index n = spec.n_free();
  int evals = 0;
  auto f_theta = [&](const VectorXd& v) {
    ++evals;
    try {
      return obj(theta_from_free(spec, v));
    } catch (const Error&) {
      return kInf;
    }
  };
  auto f_z = [&](const VectorXd& z) { return f_theta(to_box(box, z)); };
  auto dist = [&](const VectorXd& a, const VectorXd& b) {
    return (to_box(box, a) - to_box(box, b)).cwiseAbs().maxCoeff();
  };

  // deterministic start grid, strictly inside the box
  std::vector<std::vector<double>> axes;
  if (!spec.fix_d) {
    std::vector<double> ds;
    for (int k = 1;; ++k) {
      const double v = spec.d_lo + k * cfg.d_step;
      if (v >= spec.d_hi - 1e-12) break;
      ds.push_back(v);
    }
    if (ds.empty()) ds.push_back(0.5 * (spec.d_lo + spec.d_hi));
    axes.push_back(ds);
  }
  std::vector<double> cg;
  for (double c : cfg.coef_grid)
    if (std::abs(c) < spec.coef_bound) cg.push_back(c);
  for (Index k = 0; k < spec.p(); ++k) axes.push_back(cg);

  struct Cand {
    double f;
    VectorXd v;
  };
  std::vector<Cand> cands;
  if (cfg.start) {
    VectorXd v = free_params(spec, *cfg.start);
    for (Index i = 0; i < n; ++i) {
      const double w = box.hi(i) - box.lo(i);
      v(i) = std::clamp(v(i), box.lo(i) + 1e-3 * w, box.hi(i) - 1e-3 * w);
    }
    const double fv = f_theta(v);
    if (!std::isfinite(fv)) throw AllStartsFailed("objective infeasible at the given start");
    cands.push_back({fv, v});
  } else {
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
      VectorXd v(n);
      for (std::size_t a = 0; a < axes.size(); ++a) v(Index(a)) = axes[a][idx[a]];
      const double fv = f_theta(v);
      if (std::isfinite(fv)) cands.push_back({fv, v});
      std::size_t a = axes.size();
      bool done = true;
      while (a-- > 0) {
        if (++idx[a] < axes[a].size()) {
          done = false;
          break;
        }
        idx[a] = 0;
      }
      if (done) break;
    }
  }
  if (cands.empty()) throw AllStartsFailed("objective infeasible at every grid start");
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.f != b.f) return a.f < b.f;
    return lex_less(a.v, b.v);
  });

  auto leg = [&](const VectorXd& v0, double scale) {
    const VectorXd z0 = from_box(box, v0);
    const VectorXd slope = box_slope(box, z0);
    VectorXd step(n);
    for (Index i = 0; i < n; ++i) {
      const double dtheta = (!spec.fix_d && i == 0) ? cfg.d_step : 0.25;
      step(i) = std::clamp(scale * dtheta / slope(i), 1e-3, 2.0);
    }
    return nelder_mead(f_z, z0, step, cfg.xtol, cfg.ftol, cfg.max_evals, dist);
  };

  const int legs = std::min<int>(cfg.n_starts, int(cands.size()));
  NelderMeadResult best;
  best.f = kInf;
  VectorXd best_v;
  for (int s = 0; s < legs; ++s) {
    const NelderMeadResult r = leg(cands[s].v, cfg.start ? 0.4 : 1.0);
    const VectorXd v = to_box(box, r.x);
    if (r.f < best.f || (r.f == best.f && best_v.size() && lex_less(v, best_v))) {
      best = r;
      best_v = v;
    }
  }
  if (!std::isfinite(best.f)) throw AllStartsFailed("no Nelder-Mead leg reached a finite objective");
  {
    const NelderMeadResult r = leg(best_v, 0.05);
    if (r.f <= best.f) {
      best.f = r.f;
      best.converged = r.converged;
      best_v = to_box(box, r.x);
    }
  }

  FitResult fit;
  fit.kind = kind;
  fit.spec = spec;
  fit.T = T;
  fit.theta_hat = theta_from_free(spec, best_v);
  fit.objective = best.f;
  fit.n_starts = legs;
  fit.converged = best.converged;
  for (Index i = 0; i < n; ++i) {
    const double w = box.hi(i) - box.lo(i);
    if (best_v(i) - box.lo(i) < 1e-6 * w || box.hi(i) - best_v(i) < 1e-6 * w) fit.at_boundary = true;
  }
  if (fit.at_boundary) fit.converged = false;

  const ObjectiveValue ov = obj.evaluate(fit.theta_hat);
  fit.sigma2_hat = 2.0 * ov.profile / double(T - (cfg.sigma2_dof ? 1 : 0));
  fit.det_coef = ov.coef;
  fit.has_mu = kind.variant != ObjectiveKind::Variant::CSS_KNOWN_MU && ov.coef.size() > 0;
  fit.mu_hat = ov.coef.size() > 0 ? ov.coef(0) : 0.0;

  fit.cov = MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  if (cfg.compute_cov && !fit.at_boundary) {
    try {
      fit.cov = hessian_cov(kind, spec, fit.theta_hat, x, cfg.hessian_step, cfg.sigma2_dof);
      fit.cov_ok = true;
    } catch (const Error&) {
      fit.cov_ok = false;
    }
  }
  fit.se = fit.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  if (!fit.cov_ok) fit.se.setConstant(std::numeric_limits<double>::quiet_NaN());
  fit.t_stats = best_v.cwiseQuotient(fit.se);
  fit.n_evals = evals;
  return fit;
}

AsyMatrix asy_matrix(const ArmaParams<double>& arma, Index N) {
  const auto w = expand_weights(arma, N);
  const auto bh = bh_coeffs(w);
  const Index p = arma.p();
  AsyMatrix out;
  out.N = N;
  out.A.resize(p + 1, p + 1);
  out.A(0, 0) = constants::zeta2;
  const VectorXd inv = dpi_zero<double>(N).d1;
  for (Index k = 0; k < p; ++k) {
    out.A(0, k + 1) = out.A(k + 1, 0) = -bh.b1.row(k).dot(inv.transpose());
    for (Index l = 0; l <= k; ++l) out.A(k + 1, l + 1) = out.A(l + 1, k + 1) = bh.b1.row(k).dot(bh.b1.row(l));
  }
  if (p > 0) out.tail = bh.b1.rightCols(std::min<Index>(10, N)).cwiseAbs().maxCoeff();
  return out;
}

AsyMatrix asy_matrix(const ArmaParams<double>& arma) {
  check_arma(arma);
  return asy_matrix(arma, truncation_length(arma));
}

}  // namespace arfima
