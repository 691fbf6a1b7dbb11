#include "arfima/bias.hpp"

#include <cmath>
#include <map>

namespace arfima {

namespace {

using constants::zeta2;
using constants::zeta3;

// Lag weights of the first and second derivatives of the residual filter
// phi(L; phi) Delta^{d-d0} omega(L; phi0) at theta0. Index 0 is d.
struct FilterWeights {
  Index L = 0;  // sequences hold lags 0..L-1
  Index p = 0;
  std::vector<VectorXd> first;                  // p+1
  std::vector<std::vector<VectorXd>> second;    // (p+1) x (p+1)
  VectorXd harm_over;                            // H_s / s
};

FilterWeights filter_weights(const ArmaParams<double>& a, Index L) {
  FilterWeights w;
  w.L = L;
  w.p = a.p();
  const auto tab = expand_weights(a, L);
  const auto bh = bh_coeffs(tab);
  const auto dz = dpi_zero<double>(L);
  w.first.resize(w.p + 1);
  w.first[0] = -dz.d1;
  for (Index k = 0; k < w.p; ++k) w.first[k + 1] = bh.b1.row(k).transpose();
  w.second.assign(w.p + 1, std::vector<VectorXd>(w.p + 1));
  w.second[0][0] = dz.d2;
  for (Index k = 0; k < w.p; ++k) {
    w.second[0][k + 1] = w.second[k + 1][0] = -bh.hd.row(k).transpose();
    for (Index j = 0; j < w.p; ++j) w.second[k + 1][j + 1] = bh.b2[k].row(j).transpose();
  }
  w.harm_over = VectorXd::Zero(L);
  double h = 0;
  for (Index s = 1; s < L; ++s) {
    h += 1.0 / double(s);
    w.harm_over(s) = h / double(s);
  }
  return w;
}

std::vector<Index> param_index(Index p, bool fix_d) {
  std::vector<Index> idx;
  for (Index i = fix_d ? 1 : 0; i <= p; ++i) idx.push_back(i);
  return idx;
}

// Inner products and lagged triple products over the filter weights.
// exact == false: infinite sums, with the slowly decaying d-only terms in
// closed form. exact == true: T^{-1} sum_t over lags below t.
class Engine {
 public:
  Engine(const FilterWeights& w, bool exact, Index T) : w_(w), exact_(exact), T_(T) {
    lag_weight_ = VectorXd::Ones(w_.L);
    if (exact_)
      for (Index i = 0; i < w_.L; ++i) lag_weight_(i) = double(T_ - i) / double(T_);
    lag_weight_(0) = 0;
  }

  double q(Index k) const { return w_.first[k].dot(w_.harm_over); }

  double inner(const VectorXd& u, const VectorXd& v) const {
    return (u.array() * v.array() * lag_weight_.array()).sum();
  }

  double first_first(Index a, Index c) const {
    if (!exact_ && a == 0 && c == 0) return zeta2;
    return inner(w_.first[a], w_.first[c]);
  }

  // < w_{ab}, w_c >
  double second_first(Index a, Index b, Index c) const {
    if (!exact_ && c == 0) {
      if (a == 0 && b == 0) return -2.0 * zeta3;
      if (a == 0) return q(b);
      if (b == 0) return q(a);
    }
    return inner(w_.second[a][b], w_.first[c]);
  }

  // sum_{r,q} x(r) y(r+q) z(q)
  double triple(Index x, Index y, Index z) const {
    if (!exact_) {
      if (x == 0 && y == 0 && z == 0) return -2.0 * zeta3;
      if (x == 0 && y == 0) return q(z);
      if (y == 0 && z == 0) return q(x);
    }
    const VectorXd& c = conv(x, z);
    return (w_.first[y].array() * c.array() * lag_weight_.array()).sum();
  }

 private:
  const VectorXd& conv(Index x, Index z) const {
    const auto key = std::make_pair(std::min(x, z), std::max(x, z));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_[key] = causal_conv<double>(w_.first[x], w_.first[z]);
  }

  const FilterWeights& w_;
  bool exact_;
  Index T_;
  VectorXd lag_weight_;
  mutable std::map<std::pair<Index, Index>, VectorXd> cache_;
};

BiasMatrices build(const FilterWeights& w, const Engine& e, bool fix_d) {
  const auto idx = param_index(w.p, fix_d);
  const Index n = Index(idx.size());
  BiasMatrices m;
  m.A.resize(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m.A(i, j) = e.first_first(idx[i], idx[j]);
  m.Aterm = m.A;
  for (Index kk = 0; kk < n; ++kk) {
    const Index k = idx[kk];
    MatrixXd F(n, n), G(n, n), C(n, n);
    for (Index jj = 0; jj < n; ++jj)
      for (Index ll = 0; ll < n; ++ll) {
        const Index j = idx[jj], l = idx[ll];
        F(jj, ll) = e.second_first(k, j, l);
        G(jj, ll) = e.triple(k, j, l) + e.triple(j, k, l);
        C(jj, ll) = e.second_first(j, l, k) + e.second_first(k, l, j) + e.second_first(k, j, l);
      }
    m.F.push_back(F);
    m.G.push_back(G);
    m.C.push_back(C);
  }
  return m;
}

double tail_of(const FilterWeights& w) {
  double t = 0;
  const Index L = w.L, k = std::min<Index>(10, L);
  for (Index a = 1; a <= w.p; ++a) {
    t = std::max(t, w.first[a].tail(k).cwiseAbs().maxCoeff());
    for (Index b = 1; b <= w.p; ++b) t = std::max(t, w.second[a][b].tail(k).cwiseAbs().maxCoeff());
  }
  return t;
}

MatrixXd inverse(const MatrixXd& A) {
  Eigen::FullPivLU<MatrixXd> lu(A);
  if (!lu.isInvertible()) throw SingularHessian("asymptotic variance matrix is singular");
  return lu.inverse();
}

void check_boundary(double d0, const BiasOptions& opt) {
  if (std::abs(d0 - 0.5) < opt.boundary_halfwidth)
    throw BoundaryD("bias expressions are undefined for d0 near 1/2");
}

VectorXd select(const VectorXd& full, bool fix_d) { return fix_d ? VectorXd(full.tail(full.size() - 1)) : full; }

// sum_{j,l} u_j v_l g(|j-l|) split by lag: out(h) = sum over pairs at distance h
VectorXd lag_cross(const VectorXd& u, const VectorXd& v) {
  const Index M = u.size();
  VectorXd out = VectorXd::Zero(M);
  for (Index j = 0; j < M; ++j) {
    if (u(j) == 0.0) continue;
    for (Index l = 0; l < M; ++l) out(std::abs(j - l)) += u(j) * v(l);
  }
  return out;
}

VectorXd lag_cross_fft(const VectorXd& u, const VectorXd& v) {
  const Index M = u.size();
  // sum_j u_{j+h} v_j and sum_j u_j v_{j+h} via convolution with reversals
  const VectorXd vr = v.reverse(), ur = u.reverse();
  const Index n = 2 * M;
  VectorXd a = VectorXd::Zero(n), b = VectorXd::Zero(n), c = VectorXd::Zero(n);
  a.head(M) = u;
  b.head(M) = vr;
  c.head(M) = ur;
  VectorXd v2 = VectorXd::Zero(n);
  v2.head(M) = v;
  const VectorXd uv = causal_conv<double>(a, b);   // index M-1+h: sum_j u_{j+h} v_j
  const VectorXd vu = causal_conv<double>(v2, c);  // index M-1+h: sum_j v_{j+h} u_j
  VectorXd out(M);
  for (Index h = 0; h < M; ++h) out(h) = uv(M - 1 + h) + (h > 0 ? vu(M - 1 + h) : 0.0);
  return out;
}

}  // namespace

BiasMatrices bias_matrices_approx(const ArmaParams<double>& phi0, const BiasOptions& opt) {
  check_arma(phi0);
  const Index N = truncation_length(phi0, opt.min_N, opt.max_N);
  const FilterWeights w = filter_weights(phi0, N);
  const Engine e(w, false, 0);
  BiasMatrices m = build(w, e, opt.fix_d);
  m.N = N;
  m.tail = tail_of(w);
  return m;
}

BiasMatrices bias_matrices_exact(const ArmaParams<double>& phi0, Index T, const BiasOptions& opt) {
  check_arma(phi0);
  if (T < 2) throw DomainError("exact bias needs T >= 2");
  const FilterWeights w = filter_weights(phi0, T);
  const Engine e(w, true, T);
  BiasMatrices m = build(w, e, opt.fix_d);
  m.N = T;
  return m;
}

VectorXd assemble_intrinsic(const BiasMatrices& m, const MatrixXd& Ainv) {
  const Index n = m.A.rows();
  VectorXd v(n);
  for (Index k = 0; k < n; ++k) {
    const double g = (Ainv.array() * (m.G[k] + m.F[k]).array()).sum();
    const double c = ((Ainv * m.C[k] * Ainv).array() * m.Aterm.array()).sum();
    v(k) = g - 0.5 * c;
  }
  return Ainv * v;
}

VectorXd approx_intrinsic_bias(const ArmaParams<double>& phi0, Index T, const BiasOptions& opt) {
  const BiasMatrices m = bias_matrices_approx(phi0, opt);
  return assemble_intrinsic(m, inverse(m.A)) / double(T);
}

VectorXd exact_intrinsic_bias(const ArmaParams<double>& phi0, Index T, const BiasOptions& opt) {
  const BiasMatrices lim = bias_matrices_approx(phi0, opt);
  BiasMatrices ex = bias_matrices_exact(phi0, T, opt);
  ex.Aterm = ex.A;
  const MatrixXd Ainv = inverse(opt.use_AT_inverse ? ex.A : lim.A);
  return assemble_intrinsic(ex, Ainv) / double(T);
}

VectorXd score_ratio_limit(const ThetaParams& theta0, bool fix_d) {
  const auto& a = theta0.arma;
  check_arma(a);
  const double delta = 1.0 - theta0.d;
  if (!(delta < 0.5)) throw BoundaryD("infinite-horizon score ratio needs d0 > 1/2");
  Index M = a.p2() == 0 ? a.p1() + 1 : truncation_length(a, 64, Index(1) << 20, 1e-18);
  const VectorXd phi = phi_weights(a, M);
  const MatrixXd dphi = dphi_weights(a, phi);
  auto cross = [&](const VectorXd& u, const VectorXd& v) {
    return M > 512 ? lag_cross_fft(u, v) : lag_cross(u, v);
  };
  // autocorrelations of (1-L)^{-delta} and their delta-derivatives
  VectorXd rho(M), drho(M);
  rho(0) = 1;
  drho(0) = 0;
  for (Index h = 1; h < M; ++h) {
    const double r = (double(h) - 1.0 + delta) / (double(h) - delta);
    const double dr = (2.0 * double(h) - 1.0) / ((double(h) - delta) * (double(h) - delta));
    rho(h) = rho(h - 1) * r;
    drho(h) = drho(h - 1) * r + rho(h - 1) * dr;
  }
  const VectorXd cpp = cross(phi, phi);
  const double S = rho.dot(cpp);
  VectorXd out(1 + a.p());
  const double dlog_g0 = -2.0 * digamma(1.0 - 2.0 * delta) + 2.0 * digamma(1.0 - delta);
  out(0) = -0.5 * (dlog_g0 + drho.dot(cpp) / S);
  for (Index k = 0; k < a.p(); ++k) {
    const VectorXd u = dphi.row(k).transpose();
    out(1 + k) = rho.dot(cross(u, phi)) / S;
  }
  return select(out, fix_d);
}

VectorXd approx_score_bias(const ThetaParams& theta0, Index T, const BiasOptions& opt) {
  check_boundary(theta0.d, opt);
  const auto& a = theta0.arma;
  const BiasMatrices m = bias_matrices_approx(a, opt);
  VectorXd r;
  if (theta0.d > 0.5) {
    r = score_ratio_limit(theta0, opt.fix_d);
  } else {
    VectorXd full(1 + a.p());
    full(0) = -std::log(double(T)) + digamma(1.0 - theta0.d) + 1.0 / (1.0 - 2.0 * theta0.d);
    const double b1 = 1.0 - a.ar.sum(), a1 = 1.0 + a.ma.sum();
    for (Index k = 0; k < a.p1(); ++k) full(1 + k) = -1.0 / b1;
    for (Index k = 0; k < a.p2(); ++k) full(1 + a.p1() + k) = -1.0 / a1;
    r = select(full, opt.fix_d);
  }
  return inverse(m.A) * r / double(T);
}

VectorXd exact_score_bias(const ThetaParams& theta0, Index T, const BiasOptions& opt) {
  check_boundary(theta0.d, opt);
  const ConvolutedCoeffs cc = conv_coeffs(theta0, T);
  const VectorXd r = select(cc.dc * cc.c / cc.c.squaredNorm(), opt.fix_d);
  MatrixXd A;
  if (opt.use_AT_inverse)
    A = bias_matrices_exact(theta0.arma, T, opt).A;
  else
    A = bias_matrices_approx(theta0.arma, opt).A;
  return inverse(A) * r / double(T);
}

namespace {

void fill_totals(BiasReport& r) {
  r.total_css = r.score_bias + r.intrinsic_bias;
  r.total_mu0 = r.intrinsic_bias;
  r.total_mcss = r.intrinsic_bias;
}

}  // namespace

BiasReport exact_bias(const ThetaParams& theta0, Index T, const BiasOptions& opt) {
  check_boundary(theta0.d, opt);
  BiasReport r;
  r.T = T;
  r.theta0 = theta0;
  r.fix_d = opt.fix_d;
  r.exact = true;
  r.score_bias = exact_score_bias(theta0, T, opt);
  r.intrinsic_bias = exact_intrinsic_bias(theta0.arma, T, opt);
  r.score_bias_approx = approx_score_bias(theta0, T, opt);
  const BiasMatrices m = bias_matrices_approx(theta0.arma, opt);
  r.intrinsic_bias_approx = assemble_intrinsic(m, inverse(m.A)) / double(T);
  r.truncation_N = m.N;
  r.tail = m.tail;
  fill_totals(r);
  return r;
}

BiasReport approx_bias(const ThetaParams& theta0, Index T, const BiasOptions& opt) {
  check_boundary(theta0.d, opt);
  BiasReport r;
  r.T = T;
  r.theta0 = theta0;
  r.fix_d = opt.fix_d;
  r.exact = false;
  const BiasMatrices m = bias_matrices_approx(theta0.arma, opt);
  r.intrinsic_bias = r.intrinsic_bias_approx = assemble_intrinsic(m, inverse(m.A)) / double(T);
  r.score_bias = r.score_bias_approx = approx_score_bias(theta0, T, opt);
  r.truncation_N = m.N;
  r.tail = m.tail;
  fill_totals(r);
  return r;
}

Arfima1d0Matrices arfima1d0_matrices(double f) {
  if (std::abs(f) >= 1.0) throw DomainError("closed form needs |phi0| < 1");
  Arfima1d0Matrices m;
  if (f == 0.0) {
    // limits of the removable singularities at phi0 = 0
    m.A.resize(2, 2);
    m.A << zeta2, 1.0, 1.0, 1.0;
    m.C01.resize(2, 2);
    m.C01 << -6.0 * zeta3, -2.0, -2.0, 0.0;
    m.C02.resize(2, 2);
    m.C02 << -2.0, 0.0, 0.0, 0.0;
    m.F1.resize(2, 2);
    m.F1 << -2.0 * zeta3, 0.0, -1.0, 0.0;
    m.F2.resize(2, 2);
    m.F2 << -1.0, 0.0, 0.0, 0.0;
    m.G1.resize(2, 2);
    m.G1 << -4.0 * zeta3, -2.0, -1.0, -0.5;
    m.G2.resize(2, 2);
    m.G2 << -1.0, -0.5, 0.0, 0.0;
    return m;
  }
  const double lg = std::log(1.0 - f);
  const double li = dilog(-f / (1.0 - f));
  const double s = 1.0 - f * f;
  const double c12 = 2.0 / f * li - lg * lg / f;
  const double g22 = lg / s - (f / (1.0 - f) + lg) / (f * f);
  m.A.resize(2, 2);
  m.A << zeta2, -lg / f, -lg / f, 1.0 / s;
  m.C01.resize(2, 2);
  m.C01 << -6.0 * zeta3, c12, c12, 2.0 * lg / s;
  m.C02.resize(2, 2);
  m.C02 << c12, 2.0 * lg / s, 2.0 * lg / s, 0.0;
  m.F1.resize(2, 2);
  m.F1 << -2.0 * zeta3, -lg * lg / f, li / f, lg / s;
  m.F2.resize(2, 2);
  m.F2 << li / f, lg / s, 0.0, 0.0;
  m.G1.resize(2, 2);
  m.G1 << -4.0 * zeta3, 2.0 / f * li, -lg * lg / f + li / f, g22;
  m.G2.resize(2, 2);
  m.G2 << -lg * lg / f + li / f, g22, 2.0 * lg / s, -2.0 * f / (s * s);
  return m;
}

BiasReport closed_form_bias(ClosedFormCase cf, const ThetaParams& theta0, Index T) {
  BiasReport r;
  r.T = T;
  r.theta0 = theta0;
  r.exact = false;
  r.closed_form = true;
  const double d0 = theta0.d;
  const double lT = std::log(double(T));
  switch (cf) {
    case ClosedFormCase::ARFIMA0d0: {
      if (theta0.p() != 0) throw DomainError("ARFIMA(0,d,0) case takes no ARMA coefficients");
      check_boundary(d0, {});
      const double tb = -3.0 * zeta3 / (zeta2 * zeta2);
      const double ts = d0 > 0.5 ? -(digamma(d0) - digamma(2.0 * d0 - 1.0)) / zeta2
                                 : -(lT - (digamma(1.0 - d0) + 1.0 / (1.0 - 2.0 * d0))) / zeta2;
      r.intrinsic_bias = VectorXd::Constant(1, tb / double(T));
      r.score_bias = VectorXd::Constant(1, ts / double(T));
      break;
    }
    case ClosedFormCase::ARFIMA1d0: {
      if (theta0.arma.p1() != 1 || theta0.arma.p2() != 0) throw DomainError("ARFIMA(1,d,0) case needs one AR coefficient");
      check_boundary(d0, {});
      const double f = theta0.arma.ar(0);
      const Arfima1d0Matrices c = arfima1d0_matrices(f);
      BiasMatrices m;
      m.A = m.Aterm = c.A;
      m.F = {c.F1, c.F2};
      m.G = {c.G1, c.G2};
      m.C = {c.C01, c.C02};
      const MatrixXd Ainv = c.A.inverse();
      r.intrinsic_bias = assemble_intrinsic(m, Ainv) / double(T);
      VectorXd v(2);
      if (d0 > 0.5) {
        const double b0 = gen_binom(2.0 * d0 - 2.0, d0 - 1.0), b1 = gen_binom(2.0 * d0, d0);
        const double den = (1.0 - f) * (1.0 - f) * b0 + f * b1;
        v(0) = (1.0 - f) * (1.0 - f) * b0 * (digamma(2.0 * d0 - 1.0) - digamma(d0)) +
               f * b1 * (digamma(2.0 * d0 + 1.0) - digamma(d0 + 1.0));
        v(1) = (f - 1.0) * b0 + 0.5 * b1;
        v /= den;
      } else {
        v(0) = -lT + digamma(1.0 - d0) + 1.0 / (1.0 - 2.0 * d0);
        v(1) = -1.0 / (1.0 - f);
      }
      r.score_bias = Ainv * v / double(T);
      break;
    }
    case ClosedFormCase::ARMA_short: {
      const auto& a = theta0.arma;
      check_arma(a);
      const Index p = a.p();
      if (p == 0) throw DomainError("short-memory case needs ARMA coefficients");
      r.fix_d = true;
      const Index N = std::min<Index>(truncation_length(a, 256, 8192), 8192);
      const auto bh = bh_coeffs(expand_weights(a, N));
      const MatrixXd& b = bh.b1;
      MatrixXd At = b * b.transpose();
      std::vector<MatrixXd> F(p), G(p), C(p);
      for (Index mm = 0; mm < p; ++mm) {
        F[mm] = bh.b2[mm] * b.transpose();  // rows: phi index of b_{phi phi_m}
        G[mm] = MatrixXd::Zero(p, p);
        for (Index j = 0; j < p; ++j)
          for (Index l = 0; l < p; ++l) {
            double acc = 0;
            for (Index k = 1; k < N; ++k) {
              if (b(l, k) == 0.0) continue;
              double inner = 0;
              for (Index s = 1; s + k < N; ++s) inner += b(mm, s) * b(j, s + k) + b(mm, s + k) * b(j, s);
              acc += inner * b(l, k);
            }
            G[mm](j, l) = acc;
          }
        MatrixXd X = b * bh.b2[mm].transpose();  // (j,l): sum b_j b_{l,m}
        C[mm] = X.transpose() + X;
        for (Index j = 0; j < p; ++j)
          for (Index l = 0; l < p; ++l) C[mm](j, l) += b.row(mm).dot(bh.b2[j].row(l));
      }
      BiasMatrices m;
      m.A = m.Aterm = At;
      m.F = F;
      m.G = G;
      m.C = C;
      const MatrixXd Ainv = At.inverse();
      r.intrinsic_bias = assemble_intrinsic(m, Ainv) / double(T);
      VectorXd v(p);
      const double b1 = 1.0 - a.ar.sum(), a1 = 1.0 + a.ma.sum();
      for (Index k = 0; k < a.p1(); ++k) v(k) = -1.0 / b1;
      for (Index k = 0; k < a.p2(); ++k) v(a.p1() + k) = -1.0 / a1;
      r.score_bias = Ainv * v / double(T);
      r.truncation_N = N;
      break;
    }
    case ClosedFormCase::AR1: {
      if (theta0.arma.p1() != 1 || theta0.arma.p2() != 0) throw DomainError("AR(1) case needs one AR coefficient");
      r.fix_d = true;
      const double f = theta0.arma.ar(0);
      r.intrinsic_bias = VectorXd::Constant(1, -2.0 * f / double(T));
      r.score_bias = VectorXd::Constant(1, (-f - 1.0) / double(T));
      break;
    }
  }
  r.score_bias_approx = r.score_bias;
  r.intrinsic_bias_approx = r.intrinsic_bias;
  fill_totals(r);
  return r;
}

FitResult bcm_correct(const FitResult& fit, bool exact, const BiasOptions& opt_in) {
  if (fit.kind.variant != ObjectiveKind::Variant::MCSS) throw ConfigError("bcm correction applies to MCSS fits");
  BiasOptions opt = opt_in;
  opt.fix_d = fit.spec.fix_d;
  const ArmaParams<double>& phi = fit.theta_hat.arma;
  const VectorXd B = exact ? exact_intrinsic_bias(phi, fit.T, opt) : approx_intrinsic_bias(phi, fit.T, opt);
  FitResult out = fit;
  const VectorXd v = free_params(fit.spec, fit.theta_hat) - B;
  out.theta_hat = theta_from_free(fit.spec, v);
  out.bias_corrected = true;
  return out;
}

std::vector<BiasTableRow> bias_table(const std::vector<Index>& T_list, const std::vector<double>& d0_list,
                                     const ArmaParams<double>& phi0, bool closed_form, const BiasOptions& opt) {
  std::vector<BiasTableRow> rows;
  for (double d0 : d0_list)
    for (Index T : T_list) {
      BiasTableRow row;
      row.d0 = d0;
      row.T = T;
      if (std::abs(d0 - 0.5) < opt.boundary_halfwidth) {
        row.boundary = true;
        rows.push_back(row);
        continue;
      }
      ThetaParams th;
      th.d = d0;
      th.arma = phi0;
      BiasReport r;
      if (closed_form)
        r = closed_form_bias(phi0.p() == 0 ? ClosedFormCase::ARFIMA0d0 : ClosedFormCase::ARFIMA1d0, th, T);
      else
        r = approx_bias(th, T, opt);
      row.css = 100.0 * r.total_css(0);
      row.mu0 = 100.0 * r.total_mu0(0);
      row.mcss = 100.0 * r.total_mcss(0);
      rows.push_back(row);
    }
  return rows;
}

}  // namespace arfima
