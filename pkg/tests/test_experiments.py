import dataclasses
import math

import numpy as np
import pytest

from polariton_ctl.config import AppConfig, SweepConfig
from polariton_ctl.experiments import (
    ExperimentError,
    _area_point,
    _delay_point,
    _fig2_point,
    area_values,
    bandwidth_values,
    delay_values,
    delay_scan_closed_form,
    fit_period,
    run_experiment,
    run_fig5,
)
from polariton_ctl.model import to_internal_units
from polariton_ctl.units import TAU0_INTERNAL


def tiny_cfg(**sweep):
    base = AppConfig()
    return AppConfig(
        model=dataclasses.replace(base.model, n_max=2),
        sweep=SweepConfig(**sweep),
    )


def test_default_grids():
    cfg = AppConfig()
    bw = bandwidth_values(cfg)
    assert len(bw) == 20
    assert bw[0] == pytest.approx(0.1)
    assert np.any(np.isclose(bw, 0.3))  # the breakdown boundary is sampled
    areas = area_values(cfg)
    assert np.isclose(areas[1] - areas[0], 0.02)
    assert areas[-1] >= 3 * math.sqrt(2) * math.pi / 8  # reaches the second optimum
    d_a = delay_values(cfg, "a")
    assert d_a[-1] == pytest.approx(2 * (10 / 11) * TAU0_INTERNAL)
    d_b = delay_values(cfg, "b")
    assert d_b[-1] == pytest.approx(2 * (10 / 9) * TAU0_INTERNAL)


def test_custom_grid_override():
    cfg = tiny_cfg(start=0.2, stop=0.4, num=5)
    assert len(bandwidth_values(cfg)) == 5
    assert len(area_values(cfg)) == 5


def test_fit_period_exact():
    x = np.linspace(0, 12.0, 200)
    w_true = 1.37
    y = 0.3 + 0.2 * np.cos(w_true * x - 0.4)
    period = fit_period(x, y, omega_guess=1.3)
    assert period == pytest.approx(2 * math.pi / w_true, rel=1e-6)


def test_point_workers_return_expected_keys():
    cfg = tiny_cfg(dt=0.01)
    r2 = _fig2_point((cfg, 0.3, False))
    assert {"delta_omega_over_g", "fidelity", "orientation_max_abs"} <= set(r2)
    ra = _area_point((cfg, 0.4, 0.4, False))
    assert {"p0", "phase_minus", "orientation_max_abs"} <= set(ra)
    rd = _delay_point((cfg, "a", 0.0, False))
    assert {"orientation", "closed_form", "residual"} <= set(rd)


def test_delay_closed_form_matches_point_values(params):
    delays = np.linspace(0.0, 2.0, 5)
    closed = delay_scan_closed_form(params, "a", delays, 56.389 * TAU0_INTERNAL)
    cfg = AppConfig(sweep=SweepConfig(dt=0.01))
    row = _delay_point((cfg, "a", float(delays[2]), False))
    assert row["closed_form"] == pytest.approx(closed[2], abs=1e-12)


def test_run_fig5_writes_csv(tmp_path):
    cfg = tiny_cfg(num=4, dt=0.01)
    rows = run_fig5(cfg, tmp_path, "a")
    assert len(rows) == 4
    text = (tmp_path / "fig5a.csv").read_text()
    assert "# experiment=fig5a" in text
    assert "delay_over_tau0" in text.splitlines()[-5]
    resid = np.array([r["residual"] for r in rows])
    assert np.abs(resid).max() < 5e-3


def test_run_experiment_unknown_name(tmp_path):
    with pytest.raises(ExperimentError):
        run_experiment("fig9", AppConfig(), tmp_path)


def test_run_custom_requires_range(tmp_path):
    with pytest.raises(ExperimentError):
        run_experiment("custom", AppConfig(), tmp_path)


def test_fig3_grid_mode(tmp_path):
    cfg = tiny_cfg(start=0.3, stop=0.6, num=2, dt=0.01)
    rows = run_experiment("fig3", cfg, tmp_path)
    assert len(rows) == 2  # diagonal by default
    from polariton_ctl.experiments import run_fig3

    rows_grid = run_fig3(cfg, tmp_path, grid=True)
    assert len(rows_grid) == 4


def test_fig6_covers_both_branches(tmp_path):
    cfg = tiny_cfg(num=3, dt=0.01)
    rows = run_experiment("fig6", cfg, tmp_path)
    assert len(rows) == 6
    assert {r["branch"] for r in rows} == {"a", "b"}
    text = (tmp_path / "fig6.csv").read_text()
    assert text.count("\n") >= 7


def test_rabi_flag_runs(tmp_path):
    cfg = tiny_cfg(start=0.3, stop=0.3, num=1, dt=0.005)
    rows = run_experiment("fig2", cfg, tmp_path, rabi=True)
    assert rows[0]["fidelity"] > 0.5  # frequency renormalization lowers it


def test_bad_range_rejected():
    with pytest.raises(ExperimentError):
        bandwidth_values(tiny_cfg(start=0.5, stop=0.2, num=3))
    with pytest.raises(ExperimentError):
        area_values(tiny_cfg(start=0.5, stop=0.9, num=0))
    # single-point probe is allowed
    assert len(bandwidth_values(tiny_cfg(start=0.3, stop=0.3, num=1))) == 1
