#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "selbias/asymptotics.hpp"
#include "selbias/dgp.hpp"
#include "selbias/stats.hpp"

namespace selbias {

/// Settings for drawing a fresh synthetic regressor sample every replication.
struct SynthSpec {
  double y0 = kDefaultSynthY0;
  double span = kDefaultSynthSpan;
  double slope = kDefaultSynthSlope;
  double jitter_sd = kDefaultSynthJitter;
};

/// Configuration of one correlation sweep. A Dataset data_source is reused
/// every replication (the default experimental setup: regressors fixed,
/// noise redrawn); a SynthSpec draws a fresh sample per replication.
struct SweepConfig {
  std::vector<double> rho_grid;  ///< sorted ascending, unique, within [-1, 1]
  std::size_t reps = 1000;       ///< replications per grid point
  std::size_t n_obs = 200;       ///< observations per replication (SynthSpec mode)
  std::uint64_t seed = 42;       ///< master seed
  DgpParams params;              ///< rho field is ignored; the grid supplies it
  std::variant<Dataset, SynthSpec> data_source;
  unsigned threads = 1;          ///< execution width; output does not depend on it

  /// Throws DomainError / DimensionError on an invalid configuration.
  void validate() const;
};

/// Default grid -0.9 .. 0.9 step 0.1. The +-1 endpoints are excluded: there
/// the noise is deterministic given the data.
std::vector<double> default_rho_grid();

/// Aggregated Monte Carlo statistics for one grid point, with the analytic
/// probability-limit overlays computed from the same samples.
struct SweepRow {
  double rho = 0.0;
  double implied_corr = 0.0;  ///< mean attainable Corr(eps, lnd)
  double mean_beta_hat = 0.0;
  double sd_beta_hat = 0.0;
  double mean_beta_year_hat = 0.0;
  double sd_beta_year_hat = 0.0;
  double mean_ratio = 0.0;    ///< over non-degenerate reps
  double median_ratio = 0.0;  ///< over non-degenerate reps
  double sd_ratio = 0.0;      ///< over non-degenerate reps
  std::size_t n_degenerate = 0;
  double plim_beta = 0.0;       ///< averaged over reps when data is redrawn
  double plim_beta_year = 0.0;
  double plim_ratio = 0.0;
  bool sign_ok = false;  ///< sign(median - true ratio) matches the prediction
  bool flagged = false;  ///< more than half the reps were degenerate
};

/// The fixed-mode synthetic sample: one deterministic draw from the dataset
/// stream of the given master seed. Manifest replay relies on this being the
/// single place that draw happens.
Dataset fixed_synth_dataset(std::uint64_t seed, std::size_t n_obs,
                            const SynthSpec& spec);

/// One replication: generate_eps, simulate_lnl, ols_fit.
FitResult run_replication(const Dataset& data, const DgpParams& params,
                          std::mt19937_64& rng);

/// Runs the full sweep. Every replication gets an independent random stream
/// derived from (seed, grid index, rep index); replications may execute on
/// several threads, results land in pre-indexed slots and aggregation is a
/// sequential fold, so output is identical for any thread count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// Ratio of an experimental to an observational data-exponent estimate;
/// both inputs must be positive.
double progress_overstatement(double beta_experimental, double beta_observational);

}  // namespace selbias
