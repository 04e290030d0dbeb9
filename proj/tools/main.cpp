#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selbias/csv.hpp"
#include "selbias/dgp.hpp"
#include "selbias/errors.hpp"
#include "selbias/format.hpp"
#include "selbias/manifest.hpp"
#include "selbias/montecarlo.hpp"
#include "selbias/rng.hpp"
#include "selbias/svg.hpp"
#include "selbias/version.hpp"

namespace fs = std::filesystem;
using namespace selbias;

namespace {

fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("SELBIAS_OUT_DIR"); env && *env) return env;
  return ".";
}

/// Parses a decimal like "-0.25" into (scaled integer, scale). Keeps
/// grid arithmetic exact so rho values print cleanly.
bool parse_decimal(const std::string& s, long long& units, long long& scale) {
  if (s.empty()) return false;
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  if (i >= s.size()) return false;
  long long value = 0;
  scale = 1;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '.') {
      if (seen_dot) return false;
      seen_dot = true;
    } else if (s[i] >= '0' && s[i] <= '9') {
      value = value * 10 + (s[i] - '0');
      if (seen_dot) scale *= 10;
      seen_digit = true;
      if (scale > 1000000000LL) return false;
    } else {
      return false;
    }
  }
  if (!seen_digit) return false;
  units = neg ? -value : value;
  return true;
}

/// Accepts "lo:hi:step" or a comma-separated list.
std::vector<double> parse_rho_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
      throw DomainError("rho grid: expected lo:hi:step");
    }
    long long lo_u, lo_s, hi_u, hi_s, st_u, st_s;
    if (!parse_decimal(text.substr(0, c1), lo_u, lo_s) ||
        !parse_decimal(text.substr(c1 + 1, c2 - c1 - 1), hi_u, hi_s) ||
        !parse_decimal(text.substr(c2 + 1), st_u, st_s)) {
      throw DomainError("rho grid: cannot parse '" + text + "'");
    }
    // Common denominator arithmetic keeps every grid value an exact decimal.
    const long long den = std::max({lo_s, hi_s, st_s});
    lo_u *= den / lo_s;
    hi_u *= den / hi_s;
    st_u *= den / st_s;
    if (st_u <= 0) throw DomainError("rho grid: step must be > 0");
    for (long long v = lo_u; v <= hi_u; v += st_u) {
      grid.push_back(static_cast<double>(v) / static_cast<double>(den));
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t comma = text.find(',', start);
      if (comma == std::string::npos) comma = text.size();
      const std::string item = text.substr(start, comma - start);
      try {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        grid.push_back(v);
      } catch (const std::exception&) {
        throw DomainError("rho grid: cannot parse '" + item + "'");
      }
      start = comma + 1;
      if (comma == text.size()) break;
    }
  }
  if (grid.empty()) throw DomainError("rho grid: empty");
  return grid;
}

void print_kv(const char* key, const std::string& value) {
  std::cout << key << " = " << value << "\n";
}

void print_kv(const char* key, double value) { print_kv(key, fmt_double(value)); }

void print_kv(const char* key, bool value) {
  print_kv(key, std::string(value ? "true" : "false"));
}

// ---------------------------------------------------------------------------
// gen-data

struct GenDataOpts {
  std::size_t n = 200;
  double y0 = kDefaultSynthY0;
  double span = kDefaultSynthSpan;
  double slope = kDefaultSynthSlope;
  double jitter = kDefaultSynthJitter;
  std::uint64_t seed = 42;
  std::string out;
  std::string out_dir;
};

void run_gen_data(const GenDataOpts& o) {
  auto rng = rng::make_engine(o.seed, rng::Stream::dataset);
  const Dataset data = synth_dataset(o.n, o.y0, o.span, o.slope, o.jitter, rng);
  fs::path out = o.out.empty() ? resolve_out_dir(o.out_dir) / "dataset.csv"
                               : fs::path(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  emit_dataset_csv(data, out);
  std::cout << "wrote " << data.size() << " rows to " << out.string() << "\n";
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  std::string data;
  std::string from_manifest;
  std::uint64_t seed = 42;
  std::size_t reps = 1000;
  std::size_t n_obs = 200;
  std::string rho_grid;
  double lnb = 1.0;
  double beta = 0.37;
  double beta_prime = 0.45;
  std::optional<double> sigma;
  std::optional<double> y0;
  double span = kDefaultSynthSpan;
  double slope = kDefaultSynthSlope;
  double jitter = kDefaultSynthJitter;
  bool redraw_per_rep = false;
  unsigned threads = 1;
  std::string out_dir;
  double svg_width = 800.0;
  double svg_height = 500.0;
};

void run_sweep_cmd(const SweepOpts& o) {
  const fs::path out_dir = resolve_out_dir(o.out_dir);
  fs::create_directories(out_dir);
  const fs::path csv_path = out_dir / "sweep.csv";
  const fs::path svg_path = out_dir / "sweep.svg";
  const fs::path manifest_path = out_dir / "manifest.json";

  RunManifest man;
  man.artifact_version = kVersion;
  SweepConfig cfg;

  if (!o.from_manifest.empty()) {
    man = read_manifest(o.from_manifest);
    cfg = sweep_config_from_manifest(man);
    man.artifact_version = kVersion;
    man.timestamp_utc = utc_timestamp();
  } else {
    cfg.seed = o.seed;
    cfg.reps = o.reps;
    cfg.n_obs = o.n_obs;
    cfg.threads = o.threads;
    cfg.rho_grid = o.rho_grid.empty() ? default_rho_grid()
                                      : parse_rho_grid(o.rho_grid);

    const SynthSpec spec{o.y0.value_or(kDefaultSynthY0), o.span, o.slope,
                         o.jitter};
    double sigma = 0.0;
    if (!o.data.empty()) {
      Dataset data = ingest_csv(o.data, o.y0);
      sigma = o.sigma.value_or(default_sigma(data, o.beta_prime));
      man.data_mode = "ingested";
      man.data_path = o.data;
      man.data_y0 = data.y0;
      man.input_digest = file_digest(o.data);
      cfg.data_source = std::move(data);
    } else if (o.redraw_per_rep) {
      // No single sample to apply the sigma rule to; use its expectation
      // under uniform years, half of beta' * span / 2.
      sigma = o.sigma.value_or(0.25 * o.beta_prime * spec.span);
      man.data_mode = "redraw-synthetic";
      man.synth = spec;
      man.input_digest = "";
      cfg.data_source = spec;
    } else {
      Dataset data = fixed_synth_dataset(cfg.seed, cfg.n_obs, spec);
      sigma = o.sigma.value_or(default_sigma(data, o.beta_prime));
      man.data_mode = "fixed-synthetic";
      man.synth = spec;
      man.input_digest = dataset_digest(data);
      cfg.data_source = std::move(data);
    }
    cfg.params = DgpParams::from_progress_rate(o.lnb, o.beta, o.beta_prime,
                                               sigma, 0.0);

    man.seed = cfg.seed;
    man.reps = cfg.reps;
    man.n_obs = cfg.n_obs;
    man.rho_grid = cfg.rho_grid;
    man.lnb = o.lnb;
    man.beta = o.beta;
    man.beta_prime = o.beta_prime;
    man.sigma = sigma;
    man.threads = cfg.threads;
    man.timestamp_utc = utc_timestamp();
  }
  man.csv_out = csv_path.filename().string();
  man.svg_out = svg_path.filename().string();

  const auto rows = run_sweep(cfg);

  const double true_ratio = cfg.params.beta_prime();
  emit_sweep_csv(rows, csv_path);
  emit_figure_svg(rows, true_ratio, svg_path, SvgOptions{o.svg_width, o.svg_height});
  write_manifest(man, manifest_path);

  std::printf("%8s %14s %14s %8s %8s\n", "rho", "median_prog_%", "plim_prog_%",
              "n_degen", "sign_ok");
  for (const auto& r : rows) {
    std::printf("%8s %14s %14s %8zu %8s%s\n", fmt_double(r.rho).c_str(),
                fmt_double(std::round(1e4 * 100.0 * r.median_ratio) / 1e4).c_str(),
                fmt_double(std::round(1e4 * 100.0 * r.plim_ratio) / 1e4).c_str(),
                r.n_degenerate, r.sign_ok ? "yes" : "no",
                r.flagged ? "  [flagged: mostly degenerate]" : "");
  }
  std::cout << "true annual progress = " << fmt_double(100.0 * true_ratio)
            << "%\nsigma = " << fmt_double(cfg.params.sigma) << "\nwrote "
            << csv_path.string() << ", " << svg_path.string() << ", "
            << manifest_path.string() << "\n";
}

// ---------------------------------------------------------------------------
// fit

struct FitOpts {
  std::string data;
  std::optional<double> y0;
};

void run_fit(const FitOpts& o) {
  const FitData fd = ingest_fit_csv(o.data, o.y0);
  const FitResult fit = ols_fit(fd.lnl, fd.data.lnd, fd.data.years, fd.data.y0);
  print_kv("y0", fd.data.y0);
  print_kv("intercept_hat", fit.intercept_hat);
  print_kv("beta_hat", fit.beta_hat);
  print_kv("beta_year_hat", fit.beta_year_hat);
  if (fit.degenerate) {
    print_kv("ratio_hat", std::string("undefined (degenerate fit)"));
  } else {
    print_kv("ratio_hat", fit.ratio_hat);
  }
  print_kv("degenerate", fit.degenerate);
}

// ---------------------------------------------------------------------------
// plim

struct PlimOpts {
  std::string data;
  std::vector<double> lnd;
  std::vector<double> years;
  std::optional<double> y0;
  double beta = 0.37;
  double beta_prime = 0.45;
  double lnb = 1.0;
  double cov_eps = 0.0;
};

void run_plim(const PlimOpts& o) {
  MomentSet m;
  if (!o.data.empty()) {
    const Dataset data = ingest_csv(o.data, o.y0);
    m = moments(data.lnd, data.years);
  } else if (!o.lnd.empty() || !o.years.empty()) {
    m = moments(o.lnd, o.years);
  } else {
    throw DomainError("plim: provide --data or both --lnd and --years");
  }
  m.cov_lnd_eps = o.cov_eps;

  const DgpParams params = DgpParams::from_progress_rate(
      o.lnb, o.beta, o.beta_prime, 0.0, 0.0);
  const PlimReport rep = plim_estimates(m, params);
  const auto conds = check_theorem_conditions(m, params);

  print_kv("var_lnd", m.var_lnd);
  print_kv("var_year", m.var_year);
  print_kv("cov_lnd_year", m.cov_lnd_year);
  print_kv("resvar_lnd", m.resvar_lnd);
  print_kv("det", m.det);
  print_kv("cov_lnd_eps", m.cov_lnd_eps);
  print_kv("plim_beta", rep.plim_beta);
  print_kv("plim_beta_year", rep.plim_beta_year);
  print_kv("plim_ratio", rep.plim_ratio);
  print_kv("bias_ratio", rep.bias_ratio);
  print_kv("bias_ratio_direct", bias_ratio_direct(m, params));
  print_kv("cond_cov_positive", conds.cov_lnd_year_positive);
  print_kv("cond_beta_positive", conds.beta_positive);
  print_kv("cond_beta_year_positive", conds.beta_year_positive);
  print_kv("cond_lower_bound", conds.above_lower_bound);
  print_kv("predicted_sign", std::string(to_string(conds.predicted_sign)));
}

// ---------------------------------------------------------------------------
// overstate

struct OverstateOpts {
  double experimental = 0.0;
  double observational = 0.0;
};

void run_overstate(const OverstateOpts& o) {
  std::cout << fmt_double(progress_overstatement(o.experimental, o.observational))
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selection-bias toolkit for scaling-law progress estimates"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenDataOpts gen;
  auto* gen_cmd = app.add_subcommand(
      "gen-data", "generate a synthetic regressor sample as CSV");
  gen_cmd->add_option("--n", gen.n, "observations")->capture_default_str();
  gen_cmd->add_option("--y0", gen.y0, "reference year")->capture_default_str();
  gen_cmd->add_option("--span", gen.span, "year span")->capture_default_str();
  gen_cmd->add_option("--slope", gen.slope, "log-token growth per year")
      ->capture_default_str();
  gen_cmd->add_option("--jitter", gen.jitter, "sd of log-token jitter")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "master seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output file (default <out-dir>/dataset.csv)");
  gen_cmd->add_option("--out-dir", gen.out_dir, "output directory");
  gen_cmd->callback([&] { run_gen_data(gen); });

  SweepOpts sw;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "run the correlation sweep and write CSV + SVG + manifest");
  sweep_cmd->add_option("--data", sw.data, "model,year,tokens CSV (fixed regressors)");
  sweep_cmd->add_option("--from-manifest", sw.from_manifest,
                        "rerun the configuration recorded in a manifest");
  sweep_cmd->add_option("--seed", sw.seed, "master seed")->capture_default_str();
  sweep_cmd->add_option("--reps", sw.reps, "replications per grid point")
      ->capture_default_str();
  sweep_cmd->add_option("--n-obs", sw.n_obs, "observations per replication")
      ->capture_default_str();
  sweep_cmd->add_option("--rho-grid", sw.rho_grid,
                        "lo:hi:step or comma list (default -0.9:0.9:0.1)");
  sweep_cmd->add_option("--lnb", sw.lnb, "true intercept ln B")->capture_default_str();
  sweep_cmd->add_option("--beta", sw.beta, "true data exponent")->capture_default_str();
  sweep_cmd->add_option("--beta-prime", sw.beta_prime, "true annual progress rate")
      ->capture_default_str();
  sweep_cmd->add_option("--sigma", sw.sigma,
                        "latent noise sd (default: half the mean of beta'*(Y-Y0))");
  sweep_cmd->add_option("--y0", sw.y0, "reference year override");
  sweep_cmd->add_option("--span", sw.span, "synthetic year span")->capture_default_str();
  sweep_cmd->add_option("--slope", sw.slope, "synthetic log-token growth per year")
      ->capture_default_str();
  sweep_cmd->add_option("--jitter", sw.jitter, "synthetic log-token jitter sd")
      ->capture_default_str();
  sweep_cmd->add_flag("--redraw-per-rep", sw.redraw_per_rep,
                      "draw a fresh synthetic sample every replication");
  sweep_cmd->add_option("--threads", sw.threads, "worker threads")
      ->capture_default_str();
  sweep_cmd->add_option("--out-dir", sw.out_dir,
                        "output directory (env SELBIAS_OUT_DIR, then '.')");
  sweep_cmd->add_option("--svg-width", sw.svg_width, "figure width, px")
      ->capture_default_str();
  sweep_cmd->add_option("--svg-height", sw.svg_height, "figure height, px")
      ->capture_default_str();
  sweep_cmd->callback([&] { run_sweep_cmd(sw); });

  FitOpts fit;
  auto* fit_cmd = app.add_subcommand(
      "fit", "least-squares fit on a model,year,tokens,lnL CSV");
  fit_cmd->add_option("--data", fit.data, "input CSV")->required();
  fit_cmd->add_option("--y0", fit.y0, "reference year override");
  fit_cmd->callback([&] { run_fit(fit); });

  PlimOpts plim;
  auto* plim_cmd = app.add_subcommand(
      "plim", "closed-form probability limits and ratio bias");
  plim_cmd->add_option("--data", plim.data, "model,year,tokens CSV");
  plim_cmd->add_option("--lnd", plim.lnd, "log dataset sizes, comma separated")
      ->delimiter(',');
  plim_cmd->add_option("--years", plim.years, "years, comma separated")
      ->delimiter(',');
  plim_cmd->add_option("--y0", plim.y0, "reference year override");
  plim_cmd->add_option("--beta", plim.beta, "true data exponent")
      ->capture_default_str();
  plim_cmd->add_option("--beta-prime", plim.beta_prime, "true annual progress rate")
      ->capture_default_str();
  plim_cmd->add_option("--lnb", plim.lnb, "true intercept ln B")
      ->capture_default_str();
  plim_cmd->add_option("--cov-eps", plim.cov_eps,
                       "assumed Cov(ln D, eps)")->required();
  plim_cmd->callback([&] { run_plim(plim); });

  OverstateOpts over;
  auto* over_cmd = app.add_subcommand(
      "overstate", "ratio of experimental to observational beta estimates");
  over_cmd->add_option("experimental,--experimental", over.experimental,
                       "experimental beta estimate")
      ->required();
  over_cmd->add_option("observational,--observational", over.observational,
                       "observational beta estimate")
      ->required();
  over_cmd->callback([&] { run_overstate(over); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
