#pragma once

#include <span>
#include <vector>

namespace selbias {

/// Second moments of one sample. Everything is 1/n normalized so the
/// closed-form identities built on these hold exactly in finite samples,
/// not just up to an n/(n-1) factor.
struct MomentSet {
  double var_lnd = 0.0;       ///< Var(ln D), nats^2
  double var_year = 0.0;      ///< Var(Y), years^2
  double cov_lnd_year = 0.0;  ///< Cov(ln D, Y), nats*years
  double cov_lnd_eps = 0.0;   ///< Cov(ln D, eps), nats^2
  double resvar_lnd = 0.0;    ///< Var of ln D residualized on {1, Y}, nats^2
  double det = 0.0;           ///< var_lnd * var_year - cov_lnd_year^2
};

/// One least-squares fit of ln L on {1, ln D, Y - Y0}. Slope coefficients are
/// negated, so positive beta_hat / beta_year_hat mean loss falls with data
/// and with time.
struct FitResult {
  double intercept_hat = 0.0;  ///< estimate of ln B, nats
  double beta_hat = 0.0;       ///< data exponent estimate
  double beta_year_hat = 0.0;  ///< time coefficient estimate, per year
  double ratio_hat = 0.0;      ///< beta_year_hat / beta_hat; NaN when degenerate
  bool degenerate = false;     ///< |beta_hat| fell below kRatioStabilityFloor
};

/// |beta_hat| below this marks a fit degenerate instead of letting the
/// progress ratio blow up near beta_hat = 0.
inline constexpr double kRatioStabilityFloor = 1e-6;

/// Scale-free singularity tolerance: the centered normal equations count as
/// singular when det <= kSingularRelTol * var_lnd * var_year.
inline constexpr double kSingularRelTol = 1e-12;

double mean(std::span<const double> v);
/// Population (1/n) variance.
double variance(std::span<const double> v);
/// Population (1/n) covariance; lengths must match.
double covariance(std::span<const double> a, std::span<const double> b);

/// All second moments of (lnd, years, eps) at once. Requires equal lengths
/// and n >= 3. When Var(years) = 0 the residual variance falls back to
/// var_lnd (projection on a constant removes only the mean).
MomentSet moments(std::span<const double> lnd, std::span<const double> years,
                  std::span<const double> eps);
/// Same with eps identically zero.
MomentSet moments(std::span<const double> lnd, std::span<const double> years);

/// x minus its best affine fit on years. The result has zero sample mean and
/// zero sample covariance with years. Requires Var(years) > 0.
std::vector<double> residualize(std::span<const double> x,
                                std::span<const double> years);

/// Three-parameter least squares solved by centering and a closed-form 2x2
/// solve; no iterative method. Requires n >= 4 and a nonsingular centered
/// moment matrix. See FitResult for the sign convention.
FitResult ols_fit(std::span<const double> lnl, std::span<const double> lnd,
                  std::span<const double> years, double y0);

}  // namespace selbias
