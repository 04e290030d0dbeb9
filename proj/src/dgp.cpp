#include "selbias/dgp.hpp"

#include <cmath>
#include <string>

#include "selbias/errors.hpp"
#include "selbias/stats.hpp"

namespace selbias {

void Dataset::validate() const {
  if (years.size() != lnd.size()) {
    throw DimensionError("Dataset: years/lnd length mismatch");
  }
  if (years.size() < 4) {
    throw DimensionError("Dataset: need n >= 4, got " + std::to_string(years.size()));
  }
}

DgpParams DgpParams::from_progress_rate(double lnb, double beta, double beta_prime,
                                        double sigma, double rho) {
  return DgpParams{lnb, beta, beta * beta_prime, sigma, rho};
}

void DgpParams::validate() const {
  if (!(beta > 0.0)) throw DomainError("DgpParams: beta must be > 0");
  if (!(beta_year > 0.0)) throw DomainError("DgpParams: beta_year must be > 0");
  if (!(sigma >= 0.0)) throw DomainError("DgpParams: sigma must be >= 0");
  if (!(std::abs(rho) <= 1.0)) throw DomainError("DgpParams: |rho| must be <= 1");
}

std::vector<double> generate_eps(const Dataset& data, double sigma, double rho,
                                 std::mt19937_64& rng) {
  data.validate();
  const std::size_t n = data.size();
  if (n < 5) {
    throw DimensionError(
        "generate_eps: need n >= 5 for the double residualization, got " +
        std::to_string(n));
  }
  if (!(std::abs(rho) <= 1.0)) throw DomainError("generate_eps: |rho| must be <= 1");
  if (!(sigma >= 0.0)) throw DomainError("generate_eps: sigma must be >= 0");

  if (sigma == 0.0) return std::vector<double>(n, 0.0);

  // u: residual of lnd on {1, years}, standardized to unit 1/n mean square.
  const auto r = residualize(data.lnd, data.years);
  double resvar = 0.0;
  for (double x : r) resvar += x * x;
  resvar /= static_cast<double>(n);
  if (resvar <= 1e-20 * variance(data.lnd)) {
    throw DegenerateRegressorError(
        "generate_eps: lnd collinear with years, no direction for selection");
  }
  const double sd_r = std::sqrt(resvar);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = r[i] / sd_r;

  if (std::abs(rho) == 1.0) {
    std::vector<double> eps(n);
    for (std::size_t i = 0; i < n; ++i) eps[i] = sigma * rho * u[i];
    return eps;
  }

  // v: a fresh Gaussian draw swept clean of {1, years, u}, standardized.
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> z(n);
  for (double& x : z) x = gauss(rng);

  auto v = residualize(z, data.years);
  double cu = 0.0;
  for (std::size_t i = 0; i < n; ++i) cu += v[i] * u[i];
  cu /= static_cast<double>(n);  // mean(u^2) = 1, so this is the projection weight
  for (std::size_t i = 0; i < n; ++i) v[i] -= cu * u[i];

  double sv = 0.0;
  for (double x : v) sv += x * x;
  sv /= static_cast<double>(n);
  if (!(sv > 0.0)) {
    throw GenerationError("generate_eps: draw fell inside the regressor span");
  }
  const double inv_sd_v = 1.0 / std::sqrt(sv);

  const double w = std::sqrt(1.0 - rho * rho);
  std::vector<double> eps(n);
  for (std::size_t i = 0; i < n; ++i) {
    eps[i] = sigma * (rho * u[i] + w * v[i] * inv_sd_v);
  }
  return eps;
}

double implied_corr_lnd(const Dataset& data, double rho) {
  data.validate();
  const MomentSet m = moments(data.lnd, data.years);
  const double denom = m.var_lnd * m.var_year;
  if (!(denom > 0.0)) return rho;  // no constraint can bind without variation
  const double r2 = m.cov_lnd_year * m.cov_lnd_year / denom;
  return rho * std::sqrt(std::max(0.0, 1.0 - r2));
}

std::vector<double> simulate_lnl(const Dataset& data, const DgpParams& params,
                                 std::span<const double> eps) {
  data.validate();
  if (eps.size() != data.size()) {
    throw DimensionError("simulate_lnl: eps length mismatch");
  }
  std::vector<double> lnl(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    lnl[i] = params.lnb - params.beta * data.lnd[i] -
             params.beta_year * (data.years[i] - data.y0) - params.beta * eps[i];
  }
  return lnl;
}

Dataset synth_dataset(std::size_t n, double y0, double span, double slope,
                      double jitter_sd, std::mt19937_64& rng) {
  if (n < 5) {
    throw DimensionError("synth_dataset: need n >= 5, got " + std::to_string(n));
  }
  if (!(span > 0.0)) throw DomainError("synth_dataset: span must be > 0");
  if (!(slope > 0.0)) throw DomainError("synth_dataset: slope must be > 0");
  if (!(jitter_sd >= 0.0)) throw DomainError("synth_dataset: jitter_sd must be >= 0");

  // Baseline log-token level at the reference year.
  constexpr double kBaseLnTokens = 24.0;

  Dataset data;
  data.y0 = y0;
  data.years.resize(n);
  std::uniform_real_distribution<double> uni(0.0, span);
  for (double& y : data.years) y = y0 + uni(rng);

  std::normal_distribution<double> gauss(0.0, 1.0);
  data.lnd.resize(n);
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) {
      const double nu = jitter_sd > 0.0 ? jitter_sd * gauss(rng) : 0.0;
      data.lnd[i] = kBaseLnTokens + slope * (data.years[i] - y0) + nu;
    }
    if (covariance(data.lnd, data.years) > 0.0) return data;
  }
  throw GenerationError(
      "synth_dataset: could not achieve Cov(lnd, years) > 0 in 100 attempts");
}

double default_sigma(const Dataset& data, double beta_prime) {
  if (data.years.empty()) throw DimensionError("default_sigma: empty dataset");
  double s = 0.0;
  for (double y : data.years) s += beta_prime * (y - data.y0);
  return 0.5 * s / static_cast<double>(data.years.size());
}

}  // namespace selbias
