#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace selbias {

/// Regressor sample: calendar years and log training tokens, plus the
/// reference year everything is measured against.
struct Dataset {
  std::vector<double> years;  ///< calendar years, fractional allowed
  std::vector<double> lnd;    ///< log training tokens, nats
  double y0 = 0.0;            ///< reference year

  std::size_t size() const { return years.size(); }
  /// Throws DimensionError unless years and lnd have equal length n >= 4.
  void validate() const;
};

/// True structural parameters of the loss process.
struct DgpParams {
  double lnb = 0.0;        ///< intercept ln B, nats
  double beta = 0.0;       ///< data exponent, must be > 0
  double beta_year = 0.0;  ///< time coefficient per year, must be > 0
  double sigma = 0.0;      ///< sd of the latent noise, nats, >= 0
  double rho = 0.0;        ///< target correlation with residualized ln D, in [-1, 1]

  /// Annual progress rate beta_year / beta.
  double beta_prime() const { return beta_year / beta; }
  /// Users parameterize progress by beta and beta'; beta_year = beta * beta'.
  static DgpParams from_progress_rate(double lnb, double beta, double beta_prime,
                                      double sigma, double rho);
  /// Throws DomainError when beta <= 0, beta_year <= 0, sigma < 0 or |rho| > 1.
  void validate() const;
};

/// Latent algorithmic-quality noise with EXACT in-sample properties: sample
/// mean 0, sample sd = sigma, sample Cov(eps, years) = 0 and sample
/// Corr(eps, u) = rho, where u is the standardized residual of lnd on
/// {1, years}. Built by residualizing a fresh Gaussian draw on {1, years, u}
/// and mixing it with u, so the constraints hold by construction for every
/// seed, not just in expectation.
///
/// Requires n >= 5 (the double residualization eats three degrees of
/// freedom), |rho| <= 1, sigma >= 0, and lnd not collinear with years.
std::vector<double> generate_eps(const Dataset& data, double sigma, double rho,
                                 std::mt19937_64& rng);

/// The correlation with raw lnd attainable given Cov(eps, years) = 0:
/// rho * sqrt(1 - R^2), with R^2 from regressing lnd on years. Full +-1
/// correlation against raw lnd is geometrically out of reach whenever lnd
/// and years correlate; this reports the honest value.
double implied_corr_lnd(const Dataset& data, double rho);

/// Elementwise lnb - beta*lnd - beta_year*(years - y0) - beta*eps.
std::vector<double> simulate_lnl(const Dataset& data, const DgpParams& params,
                                 std::span<const double> eps);

inline constexpr double kDefaultSynthY0 = 2012.0;
inline constexpr double kDefaultSynthSpan = 12.0;    // years
inline constexpr double kDefaultSynthSlope = 0.7;    // nats per year
inline constexpr double kDefaultSynthJitter = 1.5;   // nats

/// Synthetic stand-in regressor sample: years uniform on [y0, y0 + span],
/// lnd affine in years plus Gaussian jitter. Resamples the jitter (at most
/// 100 times) until the empirical Cov(lnd, years) is positive. jitter_sd = 0
/// yields an exact line with no residual variation left for selection.
Dataset synth_dataset(std::size_t n, double y0, double span, double slope,
                      double jitter_sd, std::mt19937_64& rng);

/// Half the mean of beta_prime * (years - y0).
double default_sigma(const Dataset& data, double beta_prime);

}  // namespace selbias
