#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selbias/montecarlo.hpp"

namespace selbias {

/// Everything needed to rerun one sweep and reproduce its outputs
/// byte-for-byte: full config echo, seed, version and input digest.
struct RunManifest {
  std::string artifact_version;
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  std::size_t n_obs = 0;
  std::vector<double> rho_grid;
  double lnb = 0.0;
  double beta = 0.0;
  double beta_prime = 0.0;
  double sigma = 0.0;  ///< resolved numeric value, not the defaulting rule
  std::string data_mode;                     ///< fixed-synthetic | ingested | redraw-synthetic
  std::optional<SynthSpec> synth;            ///< synthetic modes
  std::optional<std::string> data_path;      ///< ingested mode
  std::optional<double> data_y0;             ///< resolved reference year, ingested mode
  std::string input_digest;                  ///< fnv1a64 of the regressor sample
  unsigned threads = 1;
  std::string timestamp_utc;
  std::string csv_out;
  std::string svg_out;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

/// Rebuilds the SweepConfig recorded in a manifest. Ingested mode re-reads
/// data_path and verifies the digest still matches.
SweepConfig sweep_config_from_manifest(const RunManifest& m);

/// FNV-1a 64-bit content digest, hex encoded. Not cryptographic; it only
/// pins which bytes a run saw.
std::string fnv1a64_hex(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);
/// Digest of the canonical CSV serialization of a dataset (used when the
/// sample was synthesized rather than read from a file).
std::string dataset_digest(const Dataset& data);

/// ISO-8601 UTC timestamp. Honors SOURCE_DATE_EPOCH when set, so runs that
/// need byte-identical manifests can pin it.
std::string utc_timestamp();

}  // namespace selbias
