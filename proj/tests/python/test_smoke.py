"""Smoke tests for the Python bindings."""

import math

import pytest

import selbias as sb


def fixture_dataset():
    return sb.Dataset(years=[0.0, 1.0, 2.0, 3.0], lnd=[1.0, 2.0, 4.0, 5.0], y0=0.0)


def test_version():
    assert sb.__version__ == "0.1.0"


def test_fixture_moments():
    m = sb.moments([1.0, 2.0, 4.0, 5.0], [0.0, 1.0, 2.0, 3.0])
    assert m.var_lnd == pytest.approx(2.5, abs=1e-14)
    assert m.var_year == pytest.approx(1.25, abs=1e-14)
    assert m.cov_lnd_year == pytest.approx(1.75, abs=1e-14)
    assert m.det == pytest.approx(0.0625, abs=1e-15)
    assert m.resvar_lnd == pytest.approx(0.05, abs=1e-15)


def test_fixture_plims_and_bias():
    m = sb.moments([1.0, 2.0, 4.0, 5.0], [0.0, 1.0, 2.0, 3.0])
    m.cov_lnd_eps = 0.01
    params = sb.DgpParams.from_progress_rate(1.0, 0.37, 0.45)
    rep = sb.plim_estimates(m, params)
    assert rep.plim_beta == pytest.approx(0.444, abs=1e-12)
    assert rep.plim_beta_year == pytest.approx(0.0629, abs=1e-12)
    assert rep.bias_ratio == pytest.approx(-37.0 / 120.0, abs=1e-12)
    assert sb.bias_ratio_direct(m, params) == pytest.approx(-37.0 / 120.0, abs=1e-12)
    assert rep.predicted_sign == sb.BiasSign.negative


def test_residualize_fixture():
    r = sb.residualize([1.0, 2.0, 4.0, 5.0], [0.0, 1.0, 2.0, 3.0])
    assert r == pytest.approx([0.1, -0.3, 0.3, -0.1], abs=1e-14)


def test_noiseless_recovery():
    data = sb.synth_dataset(100, seed=3)
    params = sb.DgpParams.from_progress_rate(1.0, 0.37, 0.45)
    lnl = sb.simulate_lnl(data, params, [0.0] * len(data))
    fit = sb.ols_fit(lnl, data.lnd, data.years, data.y0)
    assert fit.intercept_hat == pytest.approx(1.0, abs=1e-10)
    assert fit.beta_hat == pytest.approx(0.37, abs=1e-10)
    assert fit.beta_year_hat == pytest.approx(0.1665, abs=1e-10)
    assert not fit.degenerate


def test_generate_eps_constraints():
    data = sb.synth_dataset(80, seed=5)
    sigma, rho = 0.9, 0.4
    eps = sb.generate_eps(data, sigma, rho, seed=11)
    n = len(eps)
    mean = sum(eps) / n
    sd = math.sqrt(sum((e - mean) ** 2 for e in eps) / n)
    assert mean == pytest.approx(0.0, abs=1e-9 * sigma)
    assert sd == pytest.approx(sigma, rel=1e-9)
    my = sum(data.years) / n
    cov_y = sum((e - mean) * (y - my) for e, y in zip(eps, data.years)) / n
    assert cov_y == pytest.approx(0.0, abs=1e-8)

    md = sum(data.lnd) / n
    sd_d = math.sqrt(sum((d - md) ** 2 for d in data.lnd) / n)
    corr = sum((e - mean) * (d - md) for e, d in zip(eps, data.lnd)) / n / (sd * sd_d)
    assert corr == pytest.approx(sb.implied_corr_lnd(data, rho), abs=1e-9)


def test_run_sweep_deterministic_and_qualitative():
    cfg = sb.SweepConfig()
    cfg.rho_grid = [-0.5, 0.0, 0.5]
    cfg.reps = 30
    cfg.seed = 9
    cfg.params = sb.DgpParams.from_progress_rate(1.0, 0.37, 0.45, sigma=0.8)
    cfg.use_dataset(sb.fixed_synth_dataset(9, 60))
    rows = sb.run_sweep(cfg)
    assert [r.rho for r in rows] == [-0.5, 0.0, 0.5]
    assert rows[0].median_ratio > 0.45 > rows[2].median_ratio
    assert rows[1].median_ratio == pytest.approx(0.45, rel=1e-12)
    assert all(r.sign_ok for r in rows)
    assert all(abs(r.mean_beta_hat - r.plim_beta) < 1e-9 for r in rows)

    cfg.threads = 4
    again = sb.run_sweep(cfg)
    assert [r.median_ratio for r in again] == [r.median_ratio for r in rows]


def test_progress_overstatement():
    assert sb.progress_overstatement(0.37, 0.04) == 9.25
    with pytest.raises(sb.NumericError):
        sb.progress_overstatement(0.0, 0.1)


def test_csv_and_svg_emission(tmp_path):
    data = sb.synth_dataset(40, seed=21)
    csv_path = tmp_path / "data.csv"
    sb.emit_dataset_csv(data, csv_path)
    back = sb.ingest_csv(csv_path)
    assert list(back.years) == pytest.approx(list(data.years), abs=0.0)
    assert list(back.lnd) == pytest.approx(list(data.lnd), rel=1e-12)

    cfg = sb.SweepConfig()
    cfg.rho_grid = [-0.4, 0.0, 0.4]
    cfg.reps = 10
    cfg.seed = 2
    cfg.params = sb.DgpParams.from_progress_rate(1.0, 0.37, 0.45, sigma=0.7)
    cfg.use_dataset(data)
    rows = sb.run_sweep(cfg)
    sweep_path = tmp_path / "sweep.csv"
    sb.emit_sweep_csv(rows, sweep_path)
    lines = sweep_path.read_text().splitlines()
    assert lines[0].startswith("rho,implied_corr,mean_beta_hat")
    assert len(lines) == 1 + len(rows)

    svg = sb.render_figure_svg(rows, 0.45)
    assert svg.count('class="ref-line"') == 1
    import xml.dom.minidom

    xml.dom.minidom.parseString(svg)


def test_error_mapping(tmp_path):
    with pytest.raises(sb.DataError):
        sb.ingest_csv(tmp_path / "missing.csv")
    with pytest.raises(sb.NumericError):
        sb.ols_fit([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [1.0, 2.0, 3.0], 0.0)
