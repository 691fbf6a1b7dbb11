#include "arfima/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace arfima {

using json = nlohmann::ordered_json;

Transform transform_from_string(const std::string& s) {
  if (s == "none") return Transform::None;
  if (s == "log") return Transform::Log;
  if (s == "diff") return Transform::Diff;
  if (s == "logdiff") return Transform::LogDiff;
  throw ConfigError("unknown transform '" + s + "'");
}

std::string to_string(Transform t) {
  switch (t) {
    case Transform::None: return "none";
    case Transform::Log: return "log";
    case Transform::Diff: return "diff";
    case Transform::LogDiff: return "logdiff";
  }
  return "?";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  // shortest text that reads back to the same double
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string trim_ws(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim_ws(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  auto r = std::from_chars(b, e, v);
  return r.ec == std::errc() && r.ptr == e && std::isfinite(v);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  // lo:hi:step ranges or comma lists
  const auto parts = split(s, ':');
  if (parts.size() == 3) {
    double lo, hi, st;
    if (!parse_number(parts[0], lo) || !parse_number(parts[1], hi) || !parse_number(parts[2], st) || st <= 0)
      throw ConfigError("bad range '" + s + "'");
    const long n = std::lround(std::floor((hi - lo) / st + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(std::round((lo + i * st) * 1e12) / 1e12);
    return out;
  }
  for (const auto& p : split(s, ',')) {
    double v;
    if (!parse_number(p, v)) throw ConfigError("bad number '" + p + "'");
    out.push_back(v);
  }
  return out;
}

VectorXd to_vec(const std::vector<double>& v) {
  VectorXd out(Index(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(Index(i)) = v[i];
  return out;
}

std::vector<double> from_vec(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::pair<double, double> parse_box(const std::string& s) {
  const auto parts = split(s, ':');
  double lo, hi;
  if (parts.size() != 2 || !parse_number(parts[0], lo) || !parse_number(parts[1], hi) || !(lo < hi))
    throw ConfigError("bad --d-box '" + s + "', expected lo:hi");
  return {lo, hi};
}

std::vector<std::string> param_names(const ModelSpec& spec) {
  std::vector<std::string> n;
  if (!spec.fix_d) n.push_back("d");
  for (Index k = 0; k < spec.p1; ++k) n.push_back("ar" + std::to_string(k + 1));
  for (Index k = 0; k < spec.p2; ++k) n.push_back("ma" + std::to_string(k + 1));
  return n;
}

json matrix_json(const MatrixXd& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(std::isfinite(m(i, j)) ? json(m(i, j)) : json(nullptr));
    a.push_back(row);
  }
  return a;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s + '\n';
}

}  // namespace

DatasetFrame read_series_csv(std::istream& in, const std::string& source, const std::string& column) {
  DatasetFrame df;
  df.source = source;
  df.name = source;
  std::string line;
  long lineno = 0;
  int col = -1;
  std::vector<double> vals;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_ws(line).empty()) continue;
    const auto cells = split(line, ',');
    if (first) {
      first = false;
      double tmp;
      bool numeric = true;
      for (const auto& c : cells) numeric = numeric && parse_number(c, tmp);
      if (!numeric) {
        // header
        if (!column.empty()) {
          for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i] == column) col = int(i);
          if (col < 0) throw ParseError(source + ": no column named '" + column + "'");
        } else {
          col = int(cells.size()) - 1;
        }
        df.name = cells[col];
        continue;
      }
      if (col < 0) {
        if (!column.empty()) {
          double idx;
          if (!parse_number(column, idx)) throw ParseError(source + ": no header, column must be an index");
          col = int(idx);
        } else {
          col = int(cells.size()) - 1;
        }
      }
    }
    if (col >= int(cells.size())) throw ParseError(source + ":" + std::to_string(lineno) + ": missing column");
    double v;
    if (!parse_number(cells[col], v))
      throw ParseError(source + ":" + std::to_string(lineno) + ": not a finite number: '" + cells[col] + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw ParseError(source + ": no data");
  df.values = to_vec(vals);
  return df;
}

DatasetFrame read_series_csv(const std::string& path, const std::string& column) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return read_series_csv(f, path, column);
}

VectorXd apply_transform(const VectorXd& x, Transform t) {
  VectorXd y = x;
  if (t == Transform::Log || t == Transform::LogDiff) {
    if ((y.array() <= 0).any()) throw DomainError("log transform needs positive data");
    y = y.array().log().matrix();
  }
  if (t == Transform::Diff || t == Transform::LogDiff) {
    if (y.size() < 2) throw DomainError("differencing needs at least two observations");
    y = (y.tail(y.size() - 1) - y.head(y.size() - 1)).eval();
  }
  return y;
}

BreakFit break_filter(const VectorXd& x, double trim) {
  const Index T = x.size();
  if (T < 20) throw DomainError("break filter needs T >= 20");
  if (!(trim > 0 && trim < 0.5)) throw ConfigError("trim must lie in (0, 0.5)");
  BreakFit best;
  best.ssr = std::numeric_limits<double>::infinity();
  const Index k_lo = std::max<Index>(1, Index(std::ceil(trim * double(T) - 1e-9)));
  const Index k_hi = std::min<Index>(T - 1, Index(std::floor((1.0 - trim) * double(T) + 1e-9)));
  for (Index k = k_lo; k <= k_hi; ++k) {
    const double m_pre = x.head(k).mean(), m_post = x.tail(T - k).mean();
    const double ssr = (x.head(k).array() - m_pre).square().sum() + (x.tail(T - k).array() - m_post).square().sum();
    if (ssr < best.ssr) {
      best.ssr = ssr;
      best.k_hat = k;
      best.tau_hat = double(k) / double(T);
      best.mu_hat = m_post;
      best.beta_hat = m_pre - m_post;
    }
  }
  best.filtered = x.array() - best.mu_hat;
  best.filtered.head(best.k_hat).array() -= best.beta_hat;
  return best;
}

namespace {

json fit_json(const FitResult& fit) {
  const auto names = param_names(fit.spec);
  const VectorXd v = free_params(fit.spec, fit.theta_hat);
  json est = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) {
    est[names[i]] = {{"value", num(v(Index(i)))}, {"se", num(fit.se(Index(i)))}, {"t", num(fit.t_stats(Index(i)))}};
  }
  json j;
  j["parameters"] = est;
  j["mu"] = fit.has_mu ? num(fit.mu_hat) : json(nullptr);
  j["deterministic"] = from_vec(fit.det_coef);
  j["sigma2"] = num(fit.sigma2_hat);
  j["objective"] = num(fit.objective);
  j["cov"] = matrix_json(fit.cov);
  j["bias_corrected"] = fit.bias_corrected;
  j["diagnostics"] = {{"converged", fit.converged},
                      {"at_boundary", fit.at_boundary},
                      {"cov_ok", fit.cov_ok},
                      {"n_starts", fit.n_starts},
                      {"n_evals", fit.n_evals}};
  return j;
}

void print_fit(std::ostream& os, const FitResult& fit, const std::string& label) {
  const auto names = param_names(fit.spec);
  const VectorXd v = free_params(fit.spec, fit.theta_hat);
  char buf[160];
  os << label << "  T=" << fit.T << "\n";
  std::snprintf(buf, sizeof buf, "%-8s %12s %12s %10s\n", "param", "estimate", "se", "t");
  os << buf;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-8s %12.6f %12.6f %10.3f\n", names[i].c_str(), v(Index(i)),
                  fit.se(Index(i)), fit.t_stats(Index(i)));
    os << buf;
  }
  if (fit.has_mu) {
    std::snprintf(buf, sizeof buf, "%-8s %12.6f\n", "mu", fit.mu_hat);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%-8s %12.6f\n", "sigma2", fit.sigma2_hat);
  os << buf;
  if (!fit.converged) os << "warning: optimizer did not converge" << (fit.at_boundary ? " (box boundary)" : "") << "\n";
}

ArmaParams<double> arma_from(const std::vector<double>& ar, const std::vector<double>& ma) {
  ArmaParams<double> a;
  a.ar = to_vec(ar);
  a.ma = to_vec(ma);
  return a;
}

std::string bias_table_csv(const std::vector<BiasTableRow>& rows) {
  std::string s = "d0,T,css,mu0,mcss\n";
  for (const auto& r : rows) {
    char d0[32];
    std::snprintf(d0, sizeof d0, "%.4g", r.d0);
    if (r.boundary)
      s += csv_line({d0, std::to_string(r.T), "", "", ""});
    else
      s += csv_line({d0, std::to_string(r.T), format_double(r.css), format_double(r.mu0), format_double(r.mcss)});
  }
  return s;
}

McConfig mc_config_from_json(const json& j) {
  McConfig c;
  if (j.contains("d0")) c.d0_list = j["d0"].get<std::vector<double>>();
  if (j.contains("T")) {
    c.T_list.clear();
    for (long t : j["T"].get<std::vector<long>>()) c.T_list.push_back(Index(t));
  }
  if (j.contains("phi0")) {
    c.phi0_list.clear();
    for (const auto& p : j["phi0"]) {
      std::vector<double> ar, ma;
      if (p.is_array()) {
        ar = p.get<std::vector<double>>();
      } else {
        ar = p.value("ar", std::vector<double>{});
        ma = p.value("ma", std::vector<double>{});
      }
      c.phi0_list.push_back(arma_from(ar, ma));
    }
  }
  if (j.contains("estimators")) {
    c.estimators.clear();
    for (const auto& e : j["estimators"]) c.estimators.push_back(mc_estimator_from_string(e.get<std::string>()));
  }
  c.R = j.value("reps", c.R);
  c.base_seed = j.value("seed", c.base_seed);
  c.workers = j.value("workers", c.workers);
  c.mu0 = j.value("mu0", c.mu0);
  c.sigma0 = j.value("sigma0", c.sigma0);
  c.box_halfwidth = j.value("box_halfwidth", c.box_halfwidth);
  c.bcm_exact = j.value("bcm_exact", c.bcm_exact);
  c.est.n_starts = j.value("n_starts", c.est.n_starts);
  if (j.contains("start")) c.start = mc_start_from_string(j["start"].get<std::string>());
  return c;
}

std::vector<std::string> mc_param_names(const ArmaParams<double>& a) {
  ModelSpec s;
  s.p1 = a.p1();
  s.p2 = a.p2();
  return param_names(s);
}

std::string mc_csv(const McResult& r) {
  std::string s = "d0,phi0,T,estimator,param,bias_x100,mse_x100,se_x100,n_ok,n_fail,delta_pct_abs_bias\n";
  for (const auto& c : r.cells) {
    const auto names = mc_param_names(c.cell.phi0);
    std::string phi;
    for (Index i = 0; i < c.cell.phi0.p(); ++i) phi += (i ? ";" : "") + format_double(c.cell.phi0.coeffs()(i));
    for (const auto& [e, st] : c.stats) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        std::string delta;
        if (e == McEstimator::CSS && c.stats.count(McEstimator::MCSS)) {
          const double bc = std::abs(st.bias(Index(i)));
          const double bm = std::abs(c.stats.at(McEstimator::MCSS).bias(Index(i)));
          delta = format_double(100.0 * (bc - bm) / bm);
        }
        s += csv_line({format_double(c.cell.d0), phi, std::to_string(c.cell.T), to_string(e), names[i],
                       format_double(100.0 * st.bias(Index(i))), format_double(100.0 * st.mse(Index(i))),
                       format_double(100.0 * st.se(Index(i))), std::to_string(st.n_ok), std::to_string(st.n_fail),
                       delta});
      }
    }
  }
  return s;
}

json mc_json(const McResult& r, const json& input) {
  json j;
  j["schema_version"] = 1;
  j["command"] = "mc";
  j["input"] = input;
  json cells = json::array();
  for (const auto& c : r.cells) {
    json cj;
    cj["d0"] = c.cell.d0;
    cj["ar"] = from_vec(c.cell.phi0.ar);
    cj["ma"] = from_vec(c.cell.phi0.ma);
    cj["T"] = c.cell.T;
    json es = json::object();
    for (const auto& [e, st] : c.stats) {
      std::vector<json> b, m, se;
      for (Index i = 0; i < st.bias.size(); ++i) {
        b.push_back(num(100 * st.bias(i)));
        m.push_back(num(100 * st.mse(i)));
        se.push_back(num(100 * st.se(i)));
      }
      es[to_string(e)] = {{"bias_x100", b}, {"mse_x100", m}, {"se_x100", se}, {"n_ok", st.n_ok}, {"n_fail", st.n_fail}};
    }
    cj["estimators"] = es;
    cells.push_back(cj);
  }
  j["cells"] = cells;
  return j;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"ARFIMA estimation with an unknown level: CSS, known-level CSS, MCSS and bias-corrected MCSS"};
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate an ARFIMA(p1,d,p2) model from a CSV series");
  std::string csv, column, estimator = "mcss", transform = "none", dbox = "-5:5", out;
  int p1 = 0, p2 = 0;
  double mu0 = 0, trim = 0.15;
  bool do_break = false, trend = false, fix_d = false;
  est->add_option("csv", csv, "input CSV")->required();
  est->add_option("--column", column, "column name or index");
  est->add_option("--p1", p1, "AR order");
  est->add_option("--p2", p2, "MA order");
  est->add_option("--estimator", estimator, "css | css-mu0 | mcss | bcm");
  est->add_option("--mu0", mu0, "known level for css-mu0");
  est->add_option("--d-box", dbox, "memory parameter box lo:hi");
  est->add_option("--transform", transform, "none | log | diff | logdiff");
  est->add_flag("--break-filter", do_break, "remove a single level break first");
  est->add_option("--trim", trim, "break-filter trimming");
  est->add_flag("--trend", trend, "constant plus linear trend");
  est->add_flag("--fix-d", fix_d, "short-memory model with d = 0");
  est->add_option("--out", out, "write JSON here");

  // break-filter
  auto* brk = app.add_subcommand("break-filter", "least-squares single level break");
  std::string bcsv, bcol, btrans = "none", bout;
  double btrim = 0.15;
  brk->add_option("csv", bcsv, "input CSV")->required();
  brk->add_option("--column", bcol, "column name or index");
  brk->add_option("--transform", btrans, "none | log | diff | logdiff");
  brk->add_option("--trim", btrim, "trimming fraction");
  brk->add_option("--out", bout, "write the filtered series as CSV");

  // bias-table
  auto* bt = app.add_subcommand("bias-table", "theoretical bias of d (x100) for CSS, known level, MCSS");
  std::string t_list = "32,64,128,256", d_list = "-0.2:1.2:0.1", bt_ar, bt_ma, bt_out;
  bool closed = false;
  bt->add_option("--T", t_list, "sample sizes");
  bt->add_option("--d0", d_list, "memory parameters, list or lo:hi:step");
  bt->add_option("--ar", bt_ar, "AR coefficients");
  bt->add_option("--ma", bt_ma, "MA coefficients");
  bt->add_flag("--closed-form", closed, "use the closed-form special cases");
  bt->add_option("--out", bt_out, "write CSV here");

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo bias study");
  std::string mc_cfg, mc_out, mc_d0, mc_T, mc_ar, mc_est, mc_start;
  int mc_reps = -1, mc_workers = -1;
  long long mc_seed = -1;
  mc->add_option("--config", mc_cfg, "JSON config");
  mc->add_option("--d0", mc_d0, "memory parameters");
  mc->add_option("--ar", mc_ar, "AR(1) coefficients, one cell each");
  mc->add_option("--T", mc_T, "sample sizes");
  mc->add_option("--estimator", mc_est, "comma list of css,css-mu0,mcss,bcm");
  mc->add_option("--reps", mc_reps, "replications");
  mc->add_option("--seed", mc_seed, "base seed");
  mc->add_option("--workers", mc_workers, "threads");
  mc->add_option("--start", mc_start, "optimizer start: grid (multi-start) or truth (local from the DGP value)");
  mc->add_option("--out", mc_out, "output prefix: writes PREFIX.csv and PREFIX.json");

  // modterm-curve
  auto* mt = app.add_subcommand("modterm-curve", "m(d) of the pure fractional model");
  std::string mt_T = "32,64,128,256", mt_d = "-1:2:0.05", mt_out;
  mt->add_option("--T", mt_T, "sample sizes");
  mt->add_option("--d-range", mt_d, "lo:hi:step");
  mt->add_option("--out", mt_out, "write CSV here");

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate a type-II ARFIMA path");
  double s_d = 0.4, s_mu = 0, s_sigma = 1;
  long s_T = 64;
  long long s_seed = 1;
  std::string s_ar, s_ma, s_out;
  sim->add_option("--d0", s_d, "memory parameter");
  sim->add_option("--ar", s_ar, "AR coefficients");
  sim->add_option("--ma", s_ma, "MA coefficients");
  sim->add_option("--T", s_T, "length");
  sim->add_option("--mu0", s_mu, "level");
  sim->add_option("--sigma", s_sigma, "innovation s.d.");
  sim->add_option("--seed", s_seed, "seed");
  sim->add_option("--out", s_out, "write CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*est) {
      DatasetFrame df = read_series_csv(csv, column);
      df.transform = transform_from_string(transform);
      VectorXd x = apply_transform(df.values, df.transform);
      json input = {{"source", csv}, {"transform", transform}, {"p1", p1}, {"p2", p2}, {"estimator", estimator}};
      if (do_break) {
        const BreakFit b = break_filter(x, trim);
        x = b.filtered;
        input["break_filter"] = {{"trim", trim}, {"tau_hat", b.tau_hat}, {"mu_hat", b.mu_hat}, {"beta_hat", b.beta_hat}};
      }
      ModelSpec spec;
      spec.p1 = p1;
      spec.p2 = p2;
      std::tie(spec.d_lo, spec.d_hi) = parse_box(dbox);
      spec.det = trend ? Deterministic::Trend : Deterministic::Constant;
      spec.fix_d = fix_d;
      input["d_box"] = {spec.d_lo, spec.d_hi};
      input["deterministic"] = trend ? "constant+trend" : "constant";
      input["T"] = x.size();
      ObjectiveKind kind;
      if (estimator == "css") kind = ObjectiveKind::css();
      else if (estimator == "css-mu0") { kind = ObjectiveKind::known_mu(mu0); input["mu0"] = mu0; }
      else if (estimator == "mcss" || estimator == "bcm") kind = ObjectiveKind::mcss();
      else throw ConfigError("unknown estimator '" + estimator + "'");
      FitResult fit = estimate(kind, spec, x);
      const bool degenerate = x.maxCoeff() == x.minCoeff();
      if (degenerate) std::cout << "warning: constant series, estimation is degenerate\n";
      if (estimator == "bcm") fit = bcm_correct(fit);
      print_fit(std::cout, fit, estimator);
      json j;
      j["schema_version"] = 1;
      j["command"] = "estimate";
      j["input"] = input;
      j["result"] = fit_json(fit);
      j["result"]["diagnostics"]["degenerate"] = degenerate;
      if (!out.empty()) write_text(out, j.dump(2) + "\n");
      else std::cout << j.dump(2) << "\n";
    } else if (*brk) {
      DatasetFrame df = read_series_csv(bcsv, bcol);
      const VectorXd x = apply_transform(df.values, transform_from_string(btrans));
      const BreakFit b = break_filter(x, btrim);
      std::cout << "tau_hat," << format_double(b.tau_hat) << "\nbreak_index," << b.k_hat << "\nmu_hat,"
                << format_double(b.mu_hat) << "\nbeta_hat," << format_double(b.beta_hat) << "\nssr,"
                << format_double(b.ssr) << "\n";
      if (!bout.empty()) {
        std::string s = "filtered\n";
        for (Index i = 0; i < b.filtered.size(); ++i) s += format_double(b.filtered(i)) + "\n";
        write_text(bout, s);
      }
    } else if (*bt) {
      std::vector<Index> Ts;
      for (double t : parse_list(t_list)) Ts.push_back(Index(t));
      const auto rows = bias_table(Ts, parse_list(d_list), arma_from(parse_list(bt_ar), parse_list(bt_ma)), closed);
      const std::string s = bias_table_csv(rows);
      if (!bt_out.empty()) write_text(bt_out, s);
      else std::cout << s;
    } else if (*mc) {
      McConfig c;
      json input;
      if (!mc_cfg.empty()) {
        std::ifstream f(mc_cfg);
        if (!f) throw ConfigError("cannot open '" + mc_cfg + "'");
        json j = json::parse(f);
        c = mc_config_from_json(j);
        input = j;
      }
      if (!mc_d0.empty()) c.d0_list = parse_list(mc_d0);
      if (!mc_T.empty()) {
        c.T_list.clear();
        for (double t : parse_list(mc_T)) c.T_list.push_back(Index(t));
      }
      if (!mc_ar.empty()) {
        c.phi0_list.clear();
        for (double a : parse_list(mc_ar)) c.phi0_list.push_back(arma_from({a}, {}));
      }
      if (!mc_est.empty()) {
        c.estimators.clear();
        for (const auto& e : split(mc_est, ',')) c.estimators.push_back(mc_estimator_from_string(e));
      }
      if (mc_reps != -1) c.R = mc_reps;
      if (mc_seed >= 0) c.base_seed = std::uint64_t(mc_seed);
      if (mc_workers >= 0) c.workers = mc_workers;
      if (!mc_start.empty()) c.start = mc_start_from_string(mc_start);
      input["reps"] = c.R;
      input["start"] = to_string(c.start);
      input["seed"] = c.base_seed;
      const McResult r = run_mc(c);
      const std::string s = mc_csv(r);
      if (!mc_out.empty()) {
        write_text(mc_out + ".csv", s);
        write_text(mc_out + ".json", mc_json(r, input).dump(2) + "\n");
      }
      std::cout << s;
    } else if (*mt) {
      std::string s = "T,d,m\n";
      for (double t : parse_list(mt_T))
        for (double d : parse_list(mt_d))
          s += csv_line({std::to_string(long(t)), format_double(d), format_double(mod_term(ThetaParams::pure(d), Index(t)))});
      if (!mt_out.empty()) write_text(mt_out, s);
      else std::cout << s;
    } else if (*sim) {
      DgpSpec spec;
      spec.theta0.d = s_d;
      spec.theta0.arma = arma_from(parse_list(s_ar), parse_list(s_ma));
      spec.mu0 = s_mu;
      spec.sigma0 = s_sigma;
      spec.T = s_T;
      const VectorXd x = simulate_path(spec, std::uint64_t(s_seed));
      std::string s = "x\n";
      for (Index i = 0; i < x.size(); ++i) s += format_double(x(i)) + "\n";
      if (!s_out.empty()) write_text(s_out, s);
      else std::cout << s;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace arfima
