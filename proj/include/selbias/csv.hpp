#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "selbias/dgp.hpp"
#include "selbias/montecarlo.hpp"

namespace selbias {

/// One parsed row of the `model,year,tokens` ingestion format.
struct IngestRecord {
  std::string model;   ///< free-text label
  double year = 0.0;   ///< calendar year, fractional allowed
  double tokens = 0.0; ///< training dataset size in tokens, > 0
};

/// Sanity window for calendar years in input files.
inline constexpr double kYearMin = 1950.0;
inline constexpr double kYearMax = 2100.0;

/// Reads a `model,year,tokens` CSV (UTF-8, LF or CRLF) into a Dataset with
/// lnd = ln(tokens). Requires at least 5 data rows. y0 defaults to the floor
/// of the earliest year unless overridden.
Dataset ingest_csv(const std::filesystem::path& path,
                   std::optional<double> y0_override = {});

/// Fit-mode input: the same columns plus an observed lnL.
struct FitData {
  Dataset data;
  std::vector<double> lnl;
};

/// Reads a `model,year,tokens,lnL` CSV.
FitData ingest_fit_csv(const std::filesystem::path& path,
                       std::optional<double> y0_override = {});

/// Writes a Dataset back to the ingestion format (tokens = exp(lnd),
/// shortest round-trip decimals, LF endings). Labels are synth-0001, ...
void emit_dataset_csv(const Dataset& data, const std::filesystem::path& path);

/// The exact text emit_dataset_csv writes; also the canonical serialization
/// the manifest digests for synthesized samples.
std::string render_dataset_csv(const Dataset& data);

/// Column order of the sweep CSV, fixed.
extern const char* const kSweepCsvHeader;

/// Writes sweep rows under kSweepCsvHeader, one row per grid point, LF
/// endings, numbers in shortest round-trip decimal form.
void emit_sweep_csv(const std::vector<SweepRow>& rows,
                    const std::filesystem::path& path);

}  // namespace selbias
