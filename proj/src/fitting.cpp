#include "ssqec/fitting.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "ssqec/noise.hpp"

namespace ssqec {

namespace {

constexpr double kHuge = 1e300;

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<double> weights_for(const std::vector<ThresholdPoint>& pts, bool ci_weighted) {
  std::vector<double> w(pts.size(), 1.0);
  if (!ci_weighted) return w;
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    if (p.sigma > 0) smallest = std::min(smallest, p.sigma);
  }
  if (!std::isfinite(smallest)) return w;
  for (std::size_t i = 0; i < pts.size(); ++i) w[i] = 1.0 / (pts[i].sigma > 0 ? pts[i].sigma : smallest);
  return w;
}

double rss_weighted(const std::vector<ThresholdPoint>& pts, const std::vector<double>& w, double p_th, double mu,
                    double* a_out) {
  if (!(mu > 1e-3) || !std::isfinite(p_th)) return kHuge;
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& pt = pts[static_cast<std::size_t>(i)];
    const double x = (pt.p - p_th) * std::pow(pt.L, 1.0 / mu);
    const double wi = w[static_cast<std::size_t>(i)];
    X(i, 0) = wi;
    X(i, 1) = wi * x;
    X(i, 2) = wi * x * x;
    y(i) = wi * pt.p_fail;
  }
  const Eigen::Vector3d a = X.colPivHouseholderQr().solve(y);
  if (a_out) {
    for (int k = 0; k < 3; ++k) a_out[k] = a(k);
  }
  const double r = (X * a - y).squaredNorm();
  return std::isfinite(r) ? r : kHuge;
}

struct NmProblem {
  const std::vector<ThresholdPoint>* pts;
  const std::vector<double>* w;
};

double nm_objective(const gsl_vector* v, void* params) {
  const auto* pr = static_cast<const NmProblem*>(params);
  return rss_weighted(*pr->pts, *pr->w, gsl_vector_get(v, 0), gsl_vector_get(v, 1), nullptr);
}

struct NmOutcome {
  double p_th, mu, rss;
  bool converged;
  std::size_t iterations;
};

NmOutcome nelder_mead(const std::vector<ThresholdPoint>& pts, const std::vector<double>& w, double p0, double mu0,
                      double step_p, double step_mu, std::size_t max_iter, double tol) {
  gsl_set_error_handler_off();
  NmProblem pr{&pts, &w};
  gsl_multimin_function fn{&nm_objective, 2, &pr};
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* step = gsl_vector_alloc(2);
  gsl_vector_set(x, 0, p0);
  gsl_vector_set(x, 1, mu0);
  gsl_vector_set(step, 0, step_p);
  gsl_vector_set(step, 1, step_mu);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  bool converged = false;
  std::size_t it = 0;
  while (it < max_iter) {
    ++it;
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), tol) == GSL_SUCCESS) {
      converged = true;
      break;
    }
  }
  NmOutcome out{gsl_vector_get(s->x, 0), gsl_vector_get(s->x, 1), s->fval, converged, it};
  // A collapsed simplex that stopped on a stalled step is still a minimum.
  if (!converged && gsl_multimin_fminimizer_size(s) < 1e-10) out.converged = true;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return out;
}

std::size_t distinct(const std::vector<double>& v) { return std::set<double>(v.begin(), v.end()).size(); }

std::size_t single_n(const ThresholdDataset& d, std::optional<std::size_t> N) {
  if (N) return *N;
  std::set<std::size_t> ns;
  for (const auto& r : d.records) ns.insert(r.N);
  if (ns.size() != 1) throw std::invalid_argument("dataset holds several N values; choose one");
  return *ns.begin();
}

// Least squares line y = c0 + c1 x with standard errors.
struct Line {
  double c0 = 0, c1 = 0, se0 = 0, se1 = 0, rss = 0;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = x[static_cast<std::size_t>(i)];
    Y(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d c = X.colPivHouseholderQr().solve(Y);
  Line l;
  l.c0 = c(0);
  l.c1 = c(1);
  l.rss = (X * c - Y).squaredNorm();
  if (n > 2) {
    const double s2 = l.rss / static_cast<double>(n - 2);
    const Eigen::Matrix2d cov = s2 * (X.transpose() * X).inverse();
    l.se0 = std::sqrt(std::max(0.0, cov(0, 0)));
    l.se1 = std::sqrt(std::max(0.0, cov(1, 1)));
  }
  return l;
}

}  // namespace

double FitResult::value(const std::string& name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.value;
  }
  throw std::out_of_range("fit has no parameter '" + name + "'");
}

double FitResult::stderr_of(const std::string& name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.stderr_;
  }
  throw std::out_of_range("fit has no parameter '" + name + "'");
}

bool FitResult::has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }

nlohmann::json to_json(const FitResult& r) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& p : r.params) params[p.name] = {{"value", p.value}, {"stderr", p.stderr_}};
  return {{"schema_version", 1}, {"kind", r.kind},       {"parameters", params},       {"rss", r.rss},
          {"points", r.points},  {"converged", r.converged}, {"diagnostics", r.diagnostics}, {"flags", r.flags}};
}

// ---------------------------------------------------------------- threshold

double threshold_rss(const std::vector<ThresholdPoint>& pts, double p_th, double mu, bool ci_weighted, double* a_out) {
  return rss_weighted(pts, weights_for(pts, ci_weighted), p_th, mu, a_out);
}

FitResult fit_threshold(const std::vector<ThresholdPoint>& pts, const ThresholdFitConfig& cfg) {
  std::vector<double> ls, ps;
  for (const auto& p : pts) {
    ls.push_back(p.L);
    ps.push_back(p.p);
  }
  if (distinct(ls) < 3) throw std::invalid_argument("threshold fit needs at least 3 distinct L values");
  if (distinct(ps) < 3) throw std::invalid_argument("threshold fit needs at least 3 distinct p values");
  if (pts.size() < 6) throw std::invalid_argument("threshold fit needs at least 6 points");
  if (!(cfg.mu_min > 0 && cfg.mu_max > cfg.mu_min)) throw std::invalid_argument("threshold fit: bad mu range");

  const auto w = weights_for(pts, cfg.ci_weighted);
  const double pmin = *std::min_element(ps.begin(), ps.end());
  const double pmax = *std::max_element(ps.begin(), ps.end());
  const std::size_t gp = std::max<std::size_t>(cfg.grid_p, 2), gm = std::max<std::size_t>(cfg.grid_mu, 2);
  const double dp = (pmax - pmin) / static_cast<double>(gp - 1);
  const double dm = (cfg.mu_max - cfg.mu_min) / static_cast<double>(gm - 1);
  double best = kHuge, bp = pmin, bm = cfg.mu_min;
  for (std::size_t i = 0; i < gp; ++i) {
    for (std::size_t j = 0; j < gm; ++j) {
      const double p = pmin + dp * static_cast<double>(i), m = cfg.mu_min + dm * static_cast<double>(j);
      const double r = rss_weighted(pts, w, p, m, nullptr);
      if (r < best) {
        best = r;
        bp = p;
        bm = m;
      }
    }
  }

  FitResult res;
  res.kind = "threshold";
  res.points = pts.size();
  const auto nm = nelder_mead(pts, w, bp, bm, dp, dm, cfg.max_iterations, cfg.simplex_tolerance);
  double a[3];
  res.rss = rss_weighted(pts, w, nm.p_th, nm.mu, a);
  res.converged = nm.converged;
  if (!nm.converged) res.diagnostics.push_back("Nelder-Mead stopped after " + std::to_string(nm.iterations) + " iterations");
  if (nm.p_th < pmin || nm.p_th > pmax) res.flags.push_back("p_th_outside_data");
  if (nm.mu < cfg.mu_min || nm.mu > cfg.mu_max) res.flags.push_back("mu_outside_grid");

  std::vector<std::vector<double>> boot(5);
  if (cfg.bootstrap > 0) {
    std::vector<double> fitted(pts.size()), resid(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double x = (pts[i].p - nm.p_th) * std::pow(pts[i].L, 1.0 / nm.mu);
      fitted[i] = a[0] + a[1] * x + a[2] * x * x;
      resid[i] = pts[i].p_fail - fitted[i];
    }
    std::vector<ThresholdPoint> sample = pts;
    for (std::size_t b = 0; b < cfg.bootstrap; ++b) {
      RngStream rng(cfg.seed, {0x626f6f74, b});
      for (std::size_t i = 0; i < pts.size(); ++i) sample[i].p_fail = fitted[i] + resid[rng.below(pts.size())];
      const auto o = nelder_mead(sample, w, nm.p_th, nm.mu, dp, dm, 4000, 1e-10);
      double ab[3];
      rss_weighted(sample, w, o.p_th, o.mu, ab);
      boot[0].push_back(o.p_th);
      boot[1].push_back(o.mu);
      for (int k = 0; k < 3; ++k) boot[2 + k].push_back(ab[k]);
    }
  }
  const char* names[5] = {"p_th", "mu", "a0", "a1", "a2"};
  const double vals[5] = {nm.p_th, nm.mu, a[0], a[1], a[2]};
  for (int k = 0; k < 5; ++k) res.params.push_back({names[k], vals[k], stddev(boot[k])});
  return res;
}

FitResult fit_threshold(const ThresholdDataset& d, const ThresholdFitConfig& cfg, std::optional<std::size_t> N) {
  const std::size_t n = single_n(d, N);
  std::vector<ThresholdPoint> pts;
  for (const auto& r : d.records) {
    if (r.N == n) pts.push_back({static_cast<double>(r.L), r.p, r.p_fail(), r.ci95()});
  }
  auto res = fit_threshold(pts, cfg);
  res.diagnostics.push_back("N = " + std::to_string(n));
  return res;
}

// -------------------------------------------------------------- sustainable

FitResult fit_sustainable(const std::vector<std::pair<double, double>>& pth_by_n, const SustainableFitConfig& cfg) {
  std::vector<double> ns;
  std::optional<double> p0;
  for (const auto& [n, p] : pth_by_n) {
    ns.push_back(n);
    if (n == 0.0) {
      if (p0) throw std::invalid_argument("sustainable fit: several N = 0 points");
      p0 = p;
    }
  }
  if (!p0) throw std::invalid_argument("sustainable fit needs an N = 0 point");
  if (distinct(ns) < 3) throw std::invalid_argument("sustainable fit needs at least 3 distinct N values");
  if (!(cfg.gamma_min > 0 && cfg.gamma_max > cfg.gamma_min)) throw std::invalid_argument("sustainable fit: bad gamma range");

  auto solve = [&](const std::vector<std::pair<double, double>>& data, double gamma, double& p_sus) {
    double num = 0, den = 0;
    for (const auto& [n, y] : data) {
      const double e = std::exp(-gamma * n);
      num += (1 - e) * (y - *p0 * e);
      den += (1 - e) * (1 - e);
    }
    p_sus = den > 1e-300 ? num / den : *p0;
    double rss = 0;
    for (const auto& [n, y] : data) {
      const double e = std::exp(-gamma * n);
      const double m = p_sus * (1 - e) + *p0 * e;
      rss += (y - m) * (y - m);
    }
    return rss;
  };

  auto fit_gamma = [&](const std::vector<std::pair<double, double>>& data, double& rss_range, std::size_t& best_idx) {
    const double lo = std::log(cfg.gamma_min), hi = std::log(cfg.gamma_max);
    const std::size_t g = std::max<std::size_t>(cfg.grid, 3);
    std::vector<double> grid(g), prof(g);
    double ps;
    for (std::size_t i = 0; i < g; ++i) {
      grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g - 1);
      prof[i] = solve(data, std::exp(grid[i]), ps);
    }
    best_idx = static_cast<std::size_t>(std::min_element(prof.begin(), prof.end()) - prof.begin());
    rss_range = *std::max_element(prof.begin(), prof.end()) - prof[best_idx];
    const double a = grid[best_idx == 0 ? 0 : best_idx - 1];
    const double b = grid[best_idx + 1 == g ? g - 1 : best_idx + 1];
    const auto r = boost::math::tools::brent_find_minima(
        [&](double lg) {
          double p;
          return solve(data, std::exp(lg), p);
        },
        a, b, 52);
    return std::exp(r.first);
  };

  FitResult res;
  res.kind = "sustainable";
  res.points = pth_by_n.size();
  double range = 0;
  std::size_t idx = 0;
  const double gamma = fit_gamma(pth_by_n, range, idx);
  double p_sus;
  res.rss = solve(pth_by_n, gamma, p_sus);
  res.converged = true;

  double ybar = 0;
  for (const auto& pr : pth_by_n) ybar += pr.second;
  ybar /= static_cast<double>(pth_by_n.size());
  double tss = 0;
  for (const auto& pr : pth_by_n) tss += (pr.second - ybar) * (pr.second - ybar);
  const bool unidentifiable = range <= 1e-12 * std::max(tss, 1e-30) || tss == 0.0;
  if (unidentifiable) {
    res.flags.push_back("gamma_unidentifiable");
    res.diagnostics.push_back("loss does not depend on gamma; p_sus equals p_th(0)");
  } else if (idx == 0 || idx + 1 == std::max<std::size_t>(cfg.grid, 3)) {
    res.flags.push_back("gamma_at_bound");
  }

  std::vector<double> bs_p, bs_g;
  if (cfg.bootstrap > 0 && !unidentifiable) {
    std::vector<double> fitted, resid;
    for (const auto& [n, y] : pth_by_n) {
      const double e = std::exp(-gamma * n);
      fitted.push_back(p_sus * (1 - e) + *p0 * e);
      resid.push_back(y - fitted.back());
    }
    auto sample = pth_by_n;
    for (std::size_t b = 0; b < cfg.bootstrap; ++b) {
      RngStream rng(cfg.seed, {0x73757374, b});
      for (std::size_t i = 0; i < sample.size(); ++i) {
        sample[i].second = sample[i].first == 0.0 ? *p0 : fitted[i] + resid[rng.below(resid.size())];
      }
      double rr;
      std::size_t ii;
      const double g = fit_gamma(sample, rr, ii);
      double ps;
      solve(sample, g, ps);
      bs_p.push_back(ps);
      bs_g.push_back(g);
    }
  }
  res.params.push_back({"p_sus", p_sus, stddev(bs_p)});
  res.params.push_back({"gamma", gamma, stddev(bs_g)});
  res.params.push_back({"p_th0", *p0, 0.0});
  return res;
}

// ------------------------------------------------------------------ scaling

FitResult fit_scaling(const std::vector<ScalingPoint>& pts, const ScalingFitConfig& cfg) {
  if (!(cfg.p_th > 0)) throw std::invalid_argument("scaling fit needs p_th > 0");
  FitResult res;
  res.kind = "scaling";
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> by_l;
  for (const auto& p : pts) {
    if (cfg.odd_l_only && static_cast<long long>(std::llround(p.L)) % 2 == 0) continue;
    if (!(p.p > 0 && p.p < cfg.p_th) || !(p.p_fail > 0) || p.failures < cfg.min_failures) continue;
    by_l[p.L].first.push_back(std::log(p.p / cfg.p_th));
    by_l[p.L].second.push_back(std::log(p.p_fail));
    ++res.points;
  }
  std::vector<double> logl, logg;
  std::vector<FitParameter> slopes;
  for (const auto& [L, xy] : by_l) {
    if (distinct(xy.first) < 2) {
      res.diagnostics.push_back("L = " + std::to_string(static_cast<long long>(L)) + " skipped: fewer than 2 points");
      continue;
    }
    const Line l = fit_line(xy.first, xy.second);
    if (!(l.c1 > 0)) throw std::invalid_argument("scaling fit: non-positive slope for L = " + std::to_string(L));
    logl.push_back(std::log(L));
    logg.push_back(std::log(l.c1));
    slopes.push_back({"g_L" + std::to_string(static_cast<long long>(std::llround(L))), l.c1, l.se1});
  }
  if (logl.size() < 2) throw std::invalid_argument("scaling fit needs at least 2 L values with 2 usable points each");
  const Line l = fit_line(logl, logg);
  const double alpha = std::exp(l.c0);
  res.params.push_back({"alpha", alpha, alpha * l.se0});
  res.params.push_back({"beta", l.c1, l.se1});
  for (auto& s : slopes) res.params.push_back(std::move(s));
  res.rss = l.rss;
  res.converged = true;
  return res;
}

FitResult fit_scaling(const ThresholdDataset& d, const ScalingFitConfig& cfg, std::optional<std::size_t> N) {
  const std::size_t n = single_n(d, N);
  std::vector<ScalingPoint> pts;
  for (const auto& r : d.records) {
    if (r.N == n) pts.push_back({static_cast<double>(r.L), r.p, r.p_fail(), r.failures});
  }
  auto res = fit_scaling(pts, cfg);
  res.diagnostics.push_back("N = " + std::to_string(n));
  return res;
}

}  // namespace ssqec
