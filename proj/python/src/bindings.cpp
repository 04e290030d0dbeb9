#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <optional>

#include "selbias/asymptotics.hpp"
#include "selbias/csv.hpp"
#include "selbias/dgp.hpp"
#include "selbias/errors.hpp"
#include "selbias/manifest.hpp"
#include "selbias/montecarlo.hpp"
#include "selbias/rng.hpp"
#include "selbias/stats.hpp"
#include "selbias/svg.hpp"
#include "selbias/version.hpp"

namespace py = pybind11;
using namespace selbias;

PYBIND11_MODULE(_core, m) {
  m.doc() = "selection-bias toolkit for scaling-law progress estimates";
  m.attr("__version__") = kVersion;

  const auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DataError>(m, "DataError", base);
  py::register_exception<NumericError>(m, "NumericError", base);

  py::class_<MomentSet>(m, "MomentSet")
      .def(py::init<>())
      .def_readwrite("var_lnd", &MomentSet::var_lnd)
      .def_readwrite("var_year", &MomentSet::var_year)
      .def_readwrite("cov_lnd_year", &MomentSet::cov_lnd_year)
      .def_readwrite("cov_lnd_eps", &MomentSet::cov_lnd_eps)
      .def_readwrite("resvar_lnd", &MomentSet::resvar_lnd)
      .def_readwrite("det", &MomentSet::det)
      .def("__repr__", [](const MomentSet& s) {
        return "MomentSet(var_lnd=" + std::to_string(s.var_lnd) +
               ", var_year=" + std::to_string(s.var_year) +
               ", cov_lnd_year=" + std::to_string(s.cov_lnd_year) +
               ", cov_lnd_eps=" + std::to_string(s.cov_lnd_eps) + ")";
      });

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("intercept_hat", &FitResult::intercept_hat)
      .def_readonly("beta_hat", &FitResult::beta_hat)
      .def_readonly("beta_year_hat", &FitResult::beta_year_hat)
      .def_readonly("ratio_hat", &FitResult::ratio_hat)
      .def_readonly("degenerate", &FitResult::degenerate)
      .def("__repr__", [](const FitResult& f) {
        return "FitResult(intercept_hat=" + std::to_string(f.intercept_hat) +
               ", beta_hat=" + std::to_string(f.beta_hat) +
               ", beta_year_hat=" + std::to_string(f.beta_year_hat) + ")";
      });

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](std::vector<double> years, std::vector<double> lnd,
                       double y0) {
             Dataset d;
             d.years = std::move(years);
             d.lnd = std::move(lnd);
             d.y0 = y0;
             d.validate();
             return d;
           }),
           py::arg("years"), py::arg("lnd"), py::arg("y0"))
      .def_readonly("years", &Dataset::years)
      .def_readonly("lnd", &Dataset::lnd)
      .def_readonly("y0", &Dataset::y0)
      .def("__len__", &Dataset::size);

  py::class_<DgpParams>(m, "DgpParams")
      .def(py::init<double, double, double, double, double>(), py::arg("lnb"),
           py::arg("beta"), py::arg("beta_year"), py::arg("sigma") = 0.0,
           py::arg("rho") = 0.0)
      .def_static("from_progress_rate", &DgpParams::from_progress_rate,
                  py::arg("lnb"), py::arg("beta"), py::arg("beta_prime"),
                  py::arg("sigma") = 0.0, py::arg("rho") = 0.0)
      .def_readwrite("lnb", &DgpParams::lnb)
      .def_readwrite("beta", &DgpParams::beta)
      .def_readwrite("beta_year", &DgpParams::beta_year)
      .def_readwrite("sigma", &DgpParams::sigma)
      .def_readwrite("rho", &DgpParams::rho)
      .def_property_readonly("beta_prime", &DgpParams::beta_prime)
      .def("validate", &DgpParams::validate);

  py::enum_<BiasSign>(m, "BiasSign")
      .value("negative", BiasSign::negative)
      .value("zero", BiasSign::zero)
      .value("positive", BiasSign::positive)
      .value("undefined", BiasSign::undefined);

  py::class_<TheoremConditions>(m, "TheoremConditions")
      .def_readonly("cov_lnd_year_positive", &TheoremConditions::cov_lnd_year_positive)
      .def_readonly("beta_positive", &TheoremConditions::beta_positive)
      .def_readonly("beta_year_positive", &TheoremConditions::beta_year_positive)
      .def_readonly("above_lower_bound", &TheoremConditions::above_lower_bound)
      .def_readonly("predicted_sign", &TheoremConditions::predicted_sign)
      .def("all_hold", &TheoremConditions::all_hold);

  py::class_<PlimReport>(m, "PlimReport")
      .def_readonly("plim_beta", &PlimReport::plim_beta)
      .def_readonly("plim_beta_year", &PlimReport::plim_beta_year)
      .def_readonly("plim_ratio", &PlimReport::plim_ratio)
      .def_readonly("bias_ratio", &PlimReport::bias_ratio)
      .def_readonly("cond_cov_positive", &PlimReport::cond_cov_positive)
      .def_readonly("cond_lower_bound", &PlimReport::cond_lower_bound)
      .def_readonly("predicted_sign", &PlimReport::predicted_sign);

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("y0"),
           py::arg("span"), py::arg("slope"), py::arg("jitter_sd"))
      .def_readwrite("y0", &SynthSpec::y0)
      .def_readwrite("span", &SynthSpec::span)
      .def_readwrite("slope", &SynthSpec::slope)
      .def_readwrite("jitter_sd", &SynthSpec::jitter_sd);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("rho_grid", &SweepConfig::rho_grid)
      .def_readwrite("reps", &SweepConfig::reps)
      .def_readwrite("n_obs", &SweepConfig::n_obs)
      .def_readwrite("seed", &SweepConfig::seed)
      .def_readwrite("params", &SweepConfig::params)
      .def_readwrite("threads", &SweepConfig::threads)
      .def("use_dataset",
           [](SweepConfig& c, const Dataset& d) { c.data_source = d; },
           "reuse one fixed sample every replication")
      .def("use_synth",
           [](SweepConfig& c, const SynthSpec& s) { c.data_source = s; },
           "draw a fresh synthetic sample every replication")
      .def("validate", &SweepConfig::validate);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("rho", &SweepRow::rho)
      .def_readonly("implied_corr", &SweepRow::implied_corr)
      .def_readonly("mean_beta_hat", &SweepRow::mean_beta_hat)
      .def_readonly("sd_beta_hat", &SweepRow::sd_beta_hat)
      .def_readonly("mean_beta_year_hat", &SweepRow::mean_beta_year_hat)
      .def_readonly("sd_beta_year_hat", &SweepRow::sd_beta_year_hat)
      .def_readonly("mean_ratio", &SweepRow::mean_ratio)
      .def_readonly("median_ratio", &SweepRow::median_ratio)
      .def_readonly("sd_ratio", &SweepRow::sd_ratio)
      .def_readonly("n_degenerate", &SweepRow::n_degenerate)
      .def_readonly("plim_beta", &SweepRow::plim_beta)
      .def_readonly("plim_beta_year", &SweepRow::plim_beta_year)
      .def_readonly("plim_ratio", &SweepRow::plim_ratio)
      .def_readonly("sign_ok", &SweepRow::sign_ok)
      .def_readonly("flagged", &SweepRow::flagged);

  // stats
  m.def("moments",
        [](const std::vector<double>& lnd, const std::vector<double>& years,
           std::optional<std::vector<double>> eps) {
          return eps ? moments(lnd, years, *eps) : moments(lnd, years);
        },
        py::arg("lnd"), py::arg("years"), py::arg("eps") = py::none());
  m.def("residualize",
        [](const std::vector<double>& x, const std::vector<double>& years) {
          return residualize(x, years);
        },
        py::arg("x"), py::arg("years"));
  m.def("ols_fit",
        [](const std::vector<double>& lnl, const std::vector<double>& lnd,
           const std::vector<double>& years, double y0) {
          return ols_fit(lnl, lnd, years, y0);
        },
        py::arg("lnl"), py::arg("lnd"), py::arg("years"), py::arg("y0"));

  // dgp; seed-based entry points derive the same streams the sweep uses
  m.def("generate_eps",
        [](const Dataset& d, double sigma, double rho, std::uint64_t seed) {
          auto rng = rng::make_engine(seed, rng::Stream::eps);
          return generate_eps(d, sigma, rho, rng);
        },
        py::arg("data"), py::arg("sigma"), py::arg("rho"), py::arg("seed"));
  m.def("implied_corr_lnd", &implied_corr_lnd, py::arg("data"), py::arg("rho"));
  m.def("simulate_lnl",
        [](const Dataset& d, const DgpParams& p, const std::vector<double>& eps) {
          return simulate_lnl(d, p, eps);
        },
        py::arg("data"), py::arg("params"), py::arg("eps"));
  m.def("synth_dataset",
        [](std::size_t n, double y0, double span, double slope, double jitter_sd,
           std::uint64_t seed) {
          auto rng = rng::make_engine(seed, rng::Stream::dataset);
          return synth_dataset(n, y0, span, slope, jitter_sd, rng);
        },
        py::arg("n"), py::arg("y0") = kDefaultSynthY0,
        py::arg("span") = kDefaultSynthSpan, py::arg("slope") = kDefaultSynthSlope,
        py::arg("jitter_sd") = kDefaultSynthJitter, py::arg("seed") = 42);
  m.def("default_sigma", &default_sigma, py::arg("data"), py::arg("beta_prime"));

  // asymptotics
  m.def("plim_estimates", &plim_estimates, py::arg("moments"), py::arg("params"));
  m.def("bias_ratio_direct", &bias_ratio_direct, py::arg("moments"),
        py::arg("params"));
  m.def("check_theorem_conditions", &check_theorem_conditions, py::arg("moments"),
        py::arg("params"));

  // montecarlo
  m.def("fixed_synth_dataset", &fixed_synth_dataset, py::arg("seed"),
        py::arg("n_obs"), py::arg("spec") = SynthSpec{});
  m.def("run_replication",
        [](const Dataset& d, const DgpParams& p, std::uint64_t seed,
           std::uint64_t grid_index, std::uint64_t rep_index) {
          auto rng = rng::make_engine(seed, rng::Stream::eps, grid_index, rep_index);
          return run_replication(d, p, rng);
        },
        py::arg("data"), py::arg("params"), py::arg("seed"),
        py::arg("grid_index") = 0, py::arg("rep_index") = 0);
  m.def("run_sweep", &run_sweep, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("progress_overstatement", &progress_overstatement,
        py::arg("beta_experimental"), py::arg("beta_observational"));
  m.def("default_rho_grid", &default_rho_grid);

  // io
  m.def("ingest_csv",
        [](const std::filesystem::path& path, std::optional<double> y0) {
          return ingest_csv(path, y0);
        },
        py::arg("path"), py::arg("y0") = py::none());
  m.def("emit_dataset_csv", &emit_dataset_csv, py::arg("data"), py::arg("path"));
  m.def("emit_sweep_csv", &emit_sweep_csv, py::arg("rows"), py::arg("path"));
  m.def("emit_figure_svg",
        [](const std::vector<SweepRow>& rows, double true_ratio,
           const std::filesystem::path& path, double width, double height) {
          emit_figure_svg(rows, true_ratio, path, SvgOptions{width, height});
        },
        py::arg("rows"), py::arg("true_ratio"), py::arg("path"),
        py::arg("width") = 800.0, py::arg("height") = 500.0);
  m.def("render_figure_svg",
        [](const std::vector<SweepRow>& rows, double true_ratio, double width,
           double height) {
          return render_figure_svg(rows, true_ratio, SvgOptions{width, height});
        },
        py::arg("rows"), py::arg("true_ratio"), py::arg("width") = 800.0,
        py::arg("height") = 500.0);
}
