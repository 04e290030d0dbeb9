#pragma once

#include "selbias/dgp.hpp"
#include "selbias/stats.hpp"

namespace selbias {

/// Tri-state sign of the asymptotic ratio bias, plus an explicit undefined
/// marker for boundary cases. Boundary cases must not silently coerce to a
/// numeric sentinel.
enum class BiasSign { negative, zero, positive, undefined };

const char* to_string(BiasSign s);

/// The four hypotheses under which the bias sign is determined, evaluated on
/// sample moments, plus the implied sign prediction.
struct TheoremConditions {
  bool cov_lnd_year_positive = false;  ///< Cov(ln D, Y) > 0
  bool beta_positive = false;          ///< beta > 0
  bool beta_year_positive = false;     ///< beta_year > 0
  bool above_lower_bound = false;      ///< Cov(ln D, eps) > -resvar_lnd

  /// -sign(Cov(ln D, eps)) when all four hold, undefined otherwise.
  BiasSign predicted_sign = BiasSign::undefined;

  bool all_hold() const {
    return cov_lnd_year_positive && beta_positive && beta_year_positive &&
           above_lower_bound;
  }
};

/// Closed-form probability limits of the misspecified two-regressor fit and
/// the resulting bias of the progress ratio.
struct PlimReport {
  double plim_beta = 0.0;
  double plim_beta_year = 0.0;
  double plim_ratio = 0.0;  ///< plim_beta_year / plim_beta; NaN when plim_beta = 0
  double bias_ratio = 0.0;  ///< plim_ratio - beta_year/beta; NaN when undefined
  bool cond_cov_positive = false;
  bool cond_lower_bound = false;
  BiasSign predicted_sign = BiasSign::undefined;
};

/// Probability limits from the closed forms
///   plim beta^      = beta * (1 + var_year * cov_lnd_eps / det)
///   plim beta_year^ = beta_year - beta * cov_lnd_eps * cov_lnd_year / det
/// evaluated on sample moments. Requires det > 0 and beta > 0.
PlimReport plim_estimates(const MomentSet& m, const DgpParams& params);

/// Ratio bias straight from the residual-variance form
///   -(beta_year/beta + cov_lnd_year/var_year) * c / (resvar_lnd + c)
/// with c = cov_lnd_eps, NOT via the two plims. Throws BoundaryError when
/// resvar_lnd + c = 0.
double bias_ratio_direct(const MomentSet& m, const DgpParams& params);

/// Evaluates all four hypotheses; never throws, failures are flags.
TheoremConditions check_theorem_conditions(const MomentSet& m,
                                           const DgpParams& params);

}  // namespace selbias
