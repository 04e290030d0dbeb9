#include "selbias/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "selbias/errors.hpp"

namespace selbias {

const char* to_string(BiasSign s) {
  switch (s) {
    case BiasSign::negative: return "negative";
    case BiasSign::zero: return "zero";
    case BiasSign::positive: return "positive";
    case BiasSign::undefined: return "undefined";
  }
  return "undefined";
}

TheoremConditions check_theorem_conditions(const MomentSet& m,
                                           const DgpParams& params) {
  TheoremConditions c;
  c.cov_lnd_year_positive = m.cov_lnd_year > 0.0;
  c.beta_positive = params.beta > 0.0;
  c.beta_year_positive = params.beta_year > 0.0;
  c.above_lower_bound = m.cov_lnd_eps > -m.resvar_lnd;

  if (c.all_hold()) {
    if (m.cov_lnd_eps > 0.0) {
      c.predicted_sign = BiasSign::negative;
    } else if (m.cov_lnd_eps < 0.0) {
      c.predicted_sign = BiasSign::positive;
    } else {
      c.predicted_sign = BiasSign::zero;
    }
  } else {
    c.predicted_sign = BiasSign::undefined;
  }
  return c;
}

PlimReport plim_estimates(const MomentSet& m, const DgpParams& params) {
  if (!(m.det > 0.0)) {
    throw CollinearityError("plim_estimates: det <= 0 (regressors collinear)");
  }
  if (!(params.beta > 0.0)) {
    throw DomainError("plim_estimates: beta must be > 0");
  }

  const double c = m.cov_lnd_eps;
  PlimReport rep;
  rep.plim_beta = params.beta * (1.0 + m.var_year * c / m.det);
  rep.plim_beta_year = params.beta_year - params.beta * c * m.cov_lnd_year / m.det;

  const auto conds = check_theorem_conditions(m, params);
  rep.cond_cov_positive = conds.cov_lnd_year_positive;
  rep.cond_lower_bound = conds.above_lower_bound;
  rep.predicted_sign = conds.predicted_sign;

  if (rep.plim_beta == 0.0) {
    rep.plim_ratio = std::numeric_limits<double>::quiet_NaN();
    rep.bias_ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    rep.plim_ratio = rep.plim_beta_year / rep.plim_beta;
    rep.bias_ratio = rep.plim_ratio - params.beta_year / params.beta;
  }
  return rep;
}

double bias_ratio_direct(const MomentSet& m, const DgpParams& params) {
  if (!(params.beta > 0.0)) {
    throw DomainError("bias_ratio_direct: beta must be > 0");
  }
  if (!(m.var_year > 0.0)) {
    throw DegenerateRegressorError("bias_ratio_direct: Var(years) = 0");
  }
  const double denom = m.resvar_lnd + m.cov_lnd_eps;
  if (denom == 0.0) {
    throw BoundaryError(
        "bias_ratio_direct: Cov(lnd, eps) sits exactly at -resvar_lnd");
  }
  const double rate_term = params.beta_year / params.beta +
                           m.cov_lnd_year / m.var_year;
  return -rate_term * m.cov_lnd_eps / denom;
}

}  // namespace selbias
