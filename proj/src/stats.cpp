#include "selbias/stats.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "selbias/errors.hpp"

namespace selbias {

namespace {

void require_equal_length(std::span<const double> a, std::span<const double> b,
                          const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": length mismatch (" +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
}

}  // namespace

double mean(std::span<const double> v) {
  if (v.empty()) throw DimensionError("mean: empty vector");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

double covariance(std::span<const double> a, std::span<const double> b) {
  require_equal_length(a, b, "covariance");
  const double ma = mean(a);
  const double mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size());
}

MomentSet moments(std::span<const double> lnd, std::span<const double> years,
                  std::span<const double> eps) {
  require_equal_length(lnd, years, "moments");
  require_equal_length(lnd, eps, "moments");
  if (lnd.size() < 3) {
    throw DimensionError("moments: need n >= 3, got " + std::to_string(lnd.size()));
  }

  const std::size_t n = lnd.size();
  const double md = mean(lnd);
  const double my = mean(years);
  const double me = mean(eps);

  double vd = 0.0, vy = 0.0, cdy = 0.0, cde = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = lnd[i] - md;
    const double y = years[i] - my;
    const double e = eps[i] - me;
    vd += d * d;
    vy += y * y;
    cdy += d * y;
    cde += d * e;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  MomentSet m;
  m.var_lnd = vd * inv_n;
  m.var_year = vy * inv_n;
  m.cov_lnd_year = cdy * inv_n;
  m.cov_lnd_eps = cde * inv_n;
  m.det = m.var_lnd * m.var_year - m.cov_lnd_year * m.cov_lnd_year;

  if (m.var_year > 0.0) {
    // Residual variance from the actual residual vector, so the identity
    // det = var_year * resvar_lnd is a genuine cross-check, not a rewrite.
    const auto r = residualize(lnd, years);
    double rr = 0.0;
    for (double x : r) rr += x * x;
    m.resvar_lnd = rr * inv_n;
  } else {
    m.resvar_lnd = m.var_lnd;
  }
  return m;
}

MomentSet moments(std::span<const double> lnd, std::span<const double> years) {
  const std::vector<double> zeros(lnd.size(), 0.0);
  return moments(lnd, years, zeros);
}

std::vector<double> residualize(std::span<const double> x,
                                std::span<const double> years) {
  require_equal_length(x, years, "residualize");
  if (x.empty()) throw DimensionError("residualize: empty vectors");

  const double my = mean(years);
  double vy = 0.0;
  for (double y : years) vy += (y - my) * (y - my);
  if (vy <= 0.0) {
    throw DegenerateRegressorError("residualize: Var(years) = 0");
  }
  const double mx = mean(x);
  double cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) cxy += (x[i] - mx) * (years[i] - my);

  const double slope = cxy / vy;
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    r[i] = (x[i] - mx) - slope * (years[i] - my);
  }
  return r;
}

FitResult ols_fit(std::span<const double> lnl, std::span<const double> lnd,
                  std::span<const double> years, double y0) {
  require_equal_length(lnl, lnd, "ols_fit");
  require_equal_length(lnl, years, "ols_fit");
  if (lnl.size() < 4) {
    throw DimensionError("ols_fit: need n >= 4, got " + std::to_string(lnl.size()));
  }

  const std::size_t n = lnl.size();
  const double ml = mean(lnl);
  const double md = mean(lnd);
  double mt = 0.0;
  for (double y : years) mt += y - y0;
  mt /= static_cast<double>(n);

  double vd = 0.0, vt = 0.0, cdt = 0.0, cdl = 0.0, ctl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = lnd[i] - md;
    const double t = (years[i] - y0) - mt;
    const double l = lnl[i] - ml;
    vd += d * d;
    vt += t * t;
    cdt += d * t;
    cdl += d * l;
    ctl += t * l;
  }
  // 1/n scaling cancels in the 2x2 solve; skip it.
  const double det = vd * vt - cdt * cdt;
  if (det <= kSingularRelTol * vd * vt || !(det > 0.0)) {
    throw CollinearityError("ols_fit: singular normal equations (regressors collinear)");
  }

  const double slope_d = (cdl * vt - ctl * cdt) / det;
  const double slope_t = (ctl * vd - cdl * cdt) / det;

  FitResult fit;
  fit.beta_hat = -slope_d;
  fit.beta_year_hat = -slope_t;
  fit.intercept_hat = ml + fit.beta_hat * md + fit.beta_year_hat * mt;
  fit.degenerate = std::abs(fit.beta_hat) < kRatioStabilityFloor;
  fit.ratio_hat = fit.degenerate ? std::numeric_limits<double>::quiet_NaN()
                                 : fit.beta_year_hat / fit.beta_hat;
  return fit;
}

}  // namespace selbias
