#include "selbias/manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "selbias/csv.hpp"
#include "selbias/errors.hpp"
#include "selbias/rng.hpp"

namespace selbias {

namespace {

using nlohmann::json;

json synth_to_json(const SynthSpec& s) {
  return json{{"y0", s.y0}, {"span", s.span}, {"slope", s.slope},
              {"jitter_sd", s.jitter_sd}};
}

SynthSpec synth_from_json(const json& j) {
  SynthSpec s;
  s.y0 = j.at("y0").get<double>();
  s.span = j.at("span").get<double>();
  s.slope = j.at("slope").get<double>();
  s.jitter_sd = j.at("jitter_sd").get<double>();
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["artifact_version"] = m.artifact_version;
  j["seed"] = m.seed;
  j["reps"] = m.reps;
  j["n_obs"] = m.n_obs;
  j["rho_grid"] = m.rho_grid;
  j["params"] = json{{"lnb", m.lnb},
                     {"beta", m.beta},
                     {"beta_prime", m.beta_prime},
                     {"sigma", m.sigma}};
  json data;
  data["mode"] = m.data_mode;
  if (m.synth) data["synth"] = synth_to_json(*m.synth);
  if (m.data_path) data["path"] = *m.data_path;
  if (m.data_y0) data["y0"] = *m.data_y0;
  data["input_digest"] = m.input_digest;
  j["data"] = data;
  j["threads"] = m.threads;
  j["timestamp_utc"] = m.timestamp_utc;
  j["outputs"] = json{{"csv", m.csv_out}, {"svg", m.svg_out}};
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: invalid JSON: ") + e.what());
  }
  try {
    RunManifest m;
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.reps = j.at("reps").get<std::size_t>();
    m.n_obs = j.at("n_obs").get<std::size_t>();
    m.rho_grid = j.at("rho_grid").get<std::vector<double>>();
    const auto& p = j.at("params");
    m.lnb = p.at("lnb").get<double>();
    m.beta = p.at("beta").get<double>();
    m.beta_prime = p.at("beta_prime").get<double>();
    m.sigma = p.at("sigma").get<double>();
    const auto& d = j.at("data");
    m.data_mode = d.at("mode").get<std::string>();
    if (d.contains("synth")) m.synth = synth_from_json(d.at("synth"));
    if (d.contains("path")) m.data_path = d.at("path").get<std::string>();
    if (d.contains("y0")) m.data_y0 = d.at("y0").get<double>();
    m.input_digest = d.at("input_digest").get<std::string>();
    m.threads = j.at("threads").get<unsigned>();
    m.timestamp_utc = j.at("timestamp_utc").get<std::string>();
    m.csv_out = j.at("outputs").at("csv").get<std::string>();
    m.svg_out = j.at("outputs").at("svg").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: missing or mistyped field: ") +
                      e.what());
  }
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest_to_json(m);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_file(path));
}

SweepConfig sweep_config_from_manifest(const RunManifest& m) {
  SweepConfig cfg;
  cfg.rho_grid = m.rho_grid;
  cfg.reps = m.reps;
  cfg.n_obs = m.n_obs;
  cfg.seed = m.seed;
  cfg.threads = m.threads;
  cfg.params = DgpParams::from_progress_rate(m.lnb, m.beta, m.beta_prime,
                                             m.sigma, 0.0);
  if (m.data_mode == "fixed-synthetic") {
    if (!m.synth) throw FormatError("manifest: fixed-synthetic mode needs synth settings");
    cfg.data_source = fixed_synth_dataset(m.seed, m.n_obs, *m.synth);
  } else if (m.data_mode == "redraw-synthetic") {
    if (!m.synth) throw FormatError("manifest: redraw-synthetic mode needs synth settings");
    cfg.data_source = *m.synth;
  } else if (m.data_mode == "ingested") {
    if (!m.data_path) throw FormatError("manifest: ingested mode needs a data path");
    if (file_digest(*m.data_path) != m.input_digest) {
      throw DataError("manifest: digest mismatch, " + *m.data_path +
                      " changed since the recorded run");
    }
    cfg.data_source = ingest_csv(*m.data_path, m.data_y0);
  } else {
    throw FormatError("manifest: unknown data mode '" + m.data_mode + "'");
  }
  return cfg;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  return fnv1a64_hex(read_file(path));
}

std::string dataset_digest(const Dataset& data) {
  return fnv1a64_hex(render_dataset_csv(data));
}

std::string utc_timestamp() {
  std::time_t t = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace selbias
