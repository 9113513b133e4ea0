"""Sweep engine: bandwidth, pulse-area, and time-delay scans with CSV output.

Experiment ids name the standard result set: ``fig2`` scans the bandwidth,
``fig3``/``fig4`` scan the pulse areas along the equal-area diagonal,
``fig5a``/``fig5b`` scan one pulse's center time, and ``fig6`` repeats the
delay scans recording populations and phases.  Every CSV starts with a
``# key=value`` block holding the fully resolved configuration, so identical
configurations reproduce byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import AppConfig
from .dynamics import propagate_jc, propagate_rabi, project_to_three_state
from .model import (
    PhysicalParams,
    build_jc_hamiltonian,
    build_rabi_hamiltonian,
    polariton_eigenvalues,
    to_internal_units,
)
from .observables import (
    fidelity_to_target,
    free_orientation,
    locate_orientation_extremum,
    orientation_closed_form,
)
from .pulses import design_for_target, synthesize_field, wrap_phase
from .targets import target_from_pulse_phases
from .units import TAU0_INTERNAL

# reference times quoted for the standard parameter set (units of tau0)
FIG2_OBS = 55.278
FIG5A_TF = 52.778
FIG5A_OBS = 56.389
FIG5B_TF = 47.727
FIG5B_OBS = 54.773

SUPPORT_SIGMAS = 8.0


class ExperimentError(ValueError):
    pass


def _field_start(design) -> float:
    return -SUPPORT_SIGMAS / min(design.bandwidths) + min(design.center_times)


def _static_pieces(params, rabi):
    if rabi:
        return build_rabi_hamiltonian(params)[0], "product"
    return build_jc_hamiltonian(params), "entangled"


def _max_target_design(
    params: PhysicalParams,
    delta_omega: float,
    phi_minus: float,
    phi_plus: float,
    tau_minus: float,
    tau_plus: float,
    t_f: float,
):
    """Design the maximal-orientation field for given carrier phases/delays."""
    target = target_from_pulse_phases(
        params, phi_minus, phi_plus, tau_minus, tau_plus, t_f
    )
    design = design_for_target(target, params, delta_omega, tau_minus, tau_plus)
    return target, design


def _propagate(params, field, t0, t1, dt, stride, rabi):
    if rabi:
        return propagate_rabi(params, field, t0, t1, dt=dt, snapshot_stride=stride)
    return propagate_jc(params, field, t0, t1, dt=dt, snapshot_stride=stride)


def _three_state(traj, params, rabi):
    """(interaction coefficients at final time, schrodinger coefficients)."""
    final = traj.final_state()
    if rabi:
        coeffs = project_to_three_state(final.coefficients, params)
    else:
        coeffs = final.coefficients[:3]
    omegas = np.array([0.0, *polariton_eigenvalues(params, 0)])
    inter = coeffs * np.exp(1j * omegas * final.time)
    return inter, coeffs


# ---------------------------------------------------------------------------
# point workers (module level so process pools can pickle them)


def _fig2_point(args) -> dict:
    cfg, ratio, rabi = args
    params = to_internal_units(cfg.model)
    delta_omega = ratio * params.coupling
    t_f = cfg.target.t_f_over_tau0 * TAU0_INTERNAL
    target, design = _max_target_design(
        params,
        delta_omega,
        cfg.pulse.phi_minus,
        cfg.pulse.phi_plus,
        cfg.pulse.tau_minus,
        cfg.pulse.tau_plus,
        t_f,
    )
    field = synthesize_field(design)
    traj = _propagate(
        params, field, _field_start(design), t_f, cfg.sweep.dt,
        cfg.sweep.snapshot_stride, rabi,
    )
    fid = fidelity_to_target(traj.final_state(), target, params)
    final = traj.final_state()
    h_static, basis = _static_pieces(params, rabi)
    t_max, v_max = locate_orientation_extremum(
        final.coefficients, params, h_static, t_f, t_ref=final.time, basis=basis
    )
    v_ref = free_orientation(
        final.coefficients,
        params,
        h_static,
        np.array([FIG2_OBS * TAU0_INTERNAL]),
        t_ref=final.time,
        basis=basis,
    )[0]
    return {
        "delta_omega_over_g": ratio,
        "fidelity": fid,
        "orientation_max_abs": abs(v_max),
        "t_max_over_tau0": t_max / TAU0_INTERNAL,
        "orientation_at_reference_time": v_ref,
    }


def _area_point(args) -> dict:
    """Shared worker for the pulse-area scans (orientation + populations)."""
    cfg, theta_minus, theta_plus, rabi = args
    params = to_internal_units(cfg.model)
    delta_omega = cfg.pulse.delta_omega_over_g * params.coupling
    t_f = cfg.target.t_f_over_tau0 * TAU0_INTERNAL
    _, design = _max_target_design(
        params,
        delta_omega,
        cfg.pulse.phi_minus,
        cfg.pulse.phi_plus,
        cfg.pulse.tau_minus,
        cfg.pulse.tau_plus,
        t_f,
    )
    design = dataclasses.replace(
        design, area_magnitudes=(float(theta_minus), float(theta_plus))
    )
    field = synthesize_field(design)
    traj = _propagate(
        params, field, _field_start(design), t_f, cfg.sweep.dt,
        cfg.sweep.snapshot_stride, rabi,
    )
    final = traj.final_state()
    h_static, basis = _static_pieces(params, rabi)
    t_max, v_max = locate_orientation_extremum(
        final.coefficients, params, h_static, t_f, t_ref=final.time, basis=basis
    )
    inter, _ = _three_state(traj, params, rabi)
    norm = np.linalg.norm(inter)
    pops = np.abs(inter) ** 2
    phases = wrap_phase(np.angle(inter))
    return {
        "theta_minus": float(theta_minus),
        "theta_plus": float(theta_plus),
        "orientation_max_abs": abs(v_max),
        "t_max_over_tau0": t_max / TAU0_INTERNAL,
        "p0": pops[0],
        "p_minus": pops[1],
        "p_plus": pops[2],
        "phase0": phases[0],
        "phase_minus": phases[1],
        "phase_plus": phases[2],
        "three_state_weight": float(norm**2),
    }


def _delay_point(args) -> dict:
    cfg, branch, delay, rabi = args
    params = to_internal_units(cfg.model)
    delta_omega = cfg.pulse.delta_omega_over_g * params.coupling
    if branch == "a":
        tau_minus, tau_plus = 0.0, float(delay)
        t_f = FIG5A_TF * TAU0_INTERNAL
        t_obs = FIG5A_OBS * TAU0_INTERNAL
    else:
        tau_minus, tau_plus = float(delay), 0.0
        t_f = FIG5B_TF * TAU0_INTERNAL
        t_obs = FIG5B_OBS * TAU0_INTERNAL
    target, design = _max_target_design(
        params, delta_omega, 0.0, 0.0, tau_minus, tau_plus, t_f
    )
    field = synthesize_field(design)
    stage1 = _propagate(
        params, field, _field_start(design), t_f, cfg.sweep.dt,
        cfg.sweep.snapshot_stride, rabi,
    )
    inter, _ = _three_state(stage1, params, rabi)
    pops = np.abs(inter) ** 2
    phases = wrap_phase(np.angle(inter))
    # pulses are switched off at t_f; evolve freely to the observation time
    h_static, basis = _static_pieces(params, rabi)
    final = stage1.final_state()
    val = float(
        free_orientation(
            final.coefficients,
            params,
            h_static,
            np.array([t_obs]),
            t_ref=final.time,
            basis=basis,
        )[0]
    )
    closed = float(orientation_closed_form(target, params, t_obs))
    return {
        "delay_over_tau0": delay / TAU0_INTERNAL,
        "orientation": val,
        "closed_form": closed,
        "residual": val - closed,
        "p0": pops[0],
        "p_minus": pops[1],
        "p_plus": pops[2],
        "phase0": phases[0],
        "phase_minus": phases[1],
        "phase_plus": phases[2],
    }


# ---------------------------------------------------------------------------
# experiment runners


def _run_points(worker, args_list, workers: int):
    if workers <= 1:
        return [worker(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(worker, args_list))


def _write_csv(path: Path, comments: dict, fieldnames, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for key in sorted(comments):
            fh.write(f"# {key}={comments[key]}\n")
        writer = csv.writer(fh)
        writer.writerow(fieldnames)
        for row in rows:
            out = []
            for name in fieldnames:
                v = row[name]
                out.append(f"{v:.12e}" if isinstance(v, float) else str(v))
            writer.writerow(out)


def _comments(cfg: AppConfig, experiment: str, rabi: bool, extra=None) -> dict:
    c = cfg.resolved()
    c["experiment"] = experiment
    c["rabi"] = str(rabi)
    if extra:
        c.update(extra)
    return c


PLOT_TEMPLATE = '''"""Plot {csv} (generated alongside the sweep; needs matplotlib)."""
import csv

import matplotlib.pyplot as plt

rows = []
with open("{csv}") as fh:
    for line in fh:
        if not line.startswith("#"):
            break
    reader = csv.DictReader([line] + fh.readlines())
    rows = list(reader)

x = [float(r["{xcol}"]) for r in rows]
for col in {ycols}:
    plt.plot(x, [float(r[col]) for r in rows], label=col)
plt.xlabel("{xcol}")
plt.legend()
plt.tight_layout()
plt.savefig("{stem}.png", dpi=150)
'''


def _write_plot_script(path: Path, csv_name: str, xcol: str, ycols) -> None:
    path.write_text(
        PLOT_TEMPLATE.format(
            csv=csv_name, xcol=xcol, ycols=list(ycols), stem=path.stem
        )
    )


def _check_range(cfg: AppConfig) -> bool:
    """True when an explicit range override is present (and sane)."""
    start, stop, num = cfg.sweep.start, cfg.sweep.stop, cfg.sweep.num
    if start is None and stop is None:
        return False
    if start is None or stop is None or not start < stop:
        if start is not None and stop is not None and start == stop and (num or 0) == 1:
            return True  # single-point probe
        raise ExperimentError("sweep range needs start < stop")
    if num is not None and num < 1:
        raise ExperimentError("sweep needs at least one point")
    return True


def bandwidth_values(cfg: AppConfig) -> np.ndarray:
    if _check_range(cfg):
        return np.linspace(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.num or 20)
    return np.round(np.linspace(0.1, 0.575, 20), 12)


def area_values(cfg: AppConfig) -> np.ndarray:
    if _check_range(cfg):
        n = cfg.sweep.num or 90
        return np.round(np.linspace(cfg.sweep.start, cfg.sweep.stop, n), 12)
    return np.round(np.arange(0.02, 1.8000001, 0.02), 12)


def delay_values(cfg: AppConfig, branch: str) -> np.ndarray:
    period = (10.0 / 11.0 if branch == "a" else 10.0 / 9.0) * TAU0_INTERNAL
    if cfg.sweep.start is not None and _check_range(cfg):
        n = cfg.sweep.num or 81
        return np.linspace(cfg.sweep.start, cfg.sweep.stop, n) * TAU0_INTERNAL
    return np.linspace(0.0, 2.0 * period, cfg.sweep.num or 81)


def run_fig2(cfg: AppConfig, out_dir: Path, rabi=False, workers=1, plot_script=False) -> list[dict]:
    values = bandwidth_values(cfg)
    rows = _run_points(_fig2_point, [(cfg, float(v), rabi) for v in values], workers)
    fields = (
        "delta_omega_over_g",
        "fidelity",
        "orientation_max_abs",
        "t_max_over_tau0",
        "orientation_at_reference_time",
    )
    extra = {"reference_observation_tau0": repr(FIG2_OBS)}
    _write_csv(out_dir / "fig2.csv", _comments(cfg, "fig2", rabi, extra), fields, rows)
    if plot_script:
        _write_plot_script(
            out_dir / "plot_fig2.py", "fig2.csv", "delta_omega_over_g",
            ("fidelity", "orientation_max_abs"),
        )
    return rows


def run_fig3(cfg: AppConfig, out_dir: Path, rabi=False, workers=1, grid=False, plot_script=False) -> list[dict]:
    values = area_values(cfg)
    if grid:
        pairs = [(tp, tm) for tp in values for tm in values]
    else:
        pairs = [(v, v) for v in values]
    rows = _run_points(
        _area_point, [(cfg, tm, tp, rabi) for (tp, tm) in pairs], workers
    )
    fields = ("theta_plus", "theta_minus", "orientation_max_abs", "t_max_over_tau0")
    out = [{k: r[k] for k in fields} for r in rows]
    _write_csv(out_dir / "fig3.csv", _comments(cfg, "fig3", rabi), fields, out)
    if plot_script:
        _write_plot_script(
            out_dir / "plot_fig3.py", "fig3.csv", "theta_plus",
            ("orientation_max_abs",),
        )
    return rows


def run_fig4(cfg: AppConfig, out_dir: Path, rabi=False, workers=1, plot_script=False) -> list[dict]:
    values = area_values(cfg)
    rows = _run_points(
        _area_point, [(cfg, v, v, rabi) for v in values], workers
    )
    fields = (
        "theta_plus",
        "p0",
        "p_minus",
        "p_plus",
        "phase0",
        "phase_minus",
        "phase_plus",
        "three_state_weight",
    )
    out = [{k: r[k] for k in fields} for r in rows]
    _write_csv(out_dir / "fig4.csv", _comments(cfg, "fig4", rabi), fields, out)
    if plot_script:
        _write_plot_script(
            out_dir / "plot_fig4.py", "fig4.csv", "theta_plus",
            ("p0", "p_minus", "p_plus", "phase0", "phase_minus", "phase_plus"),
        )
    return rows


def run_fig5(cfg: AppConfig, out_dir: Path, branch: str, rabi=False, workers=1, plot_script=False) -> list[dict]:
    if branch not in ("a", "b"):
        raise ExperimentError("fig5 branch must be 'a' or 'b'")
    delays = delay_values(cfg, branch)
    rows = _run_points(
        _delay_point, [(cfg, branch, float(d), rabi) for d in delays], workers
    )
    fields = ("delay_over_tau0", "orientation", "closed_form", "residual")
    out = [{k: r[k] for k in fields} for r in rows]
    tf = FIG5A_TF if branch == "a" else FIG5B_TF
    obs = FIG5A_OBS if branch == "a" else FIG5B_OBS
    extra = {"t_f_over_tau0": repr(tf), "observation_over_tau0": repr(obs)}
    _write_csv(
        out_dir / f"fig5{branch}.csv",
        _comments(cfg, f"fig5{branch}", rabi, extra),
        fields,
        out,
    )
    if plot_script:
        _write_plot_script(
            out_dir / f"plot_fig5{branch}.py", f"fig5{branch}.csv",
            "delay_over_tau0", ("orientation", "closed_form"),
        )
    return rows


def run_fig6(cfg: AppConfig, out_dir: Path, rabi=False, workers=1, plot_script=False) -> list[dict]:
    all_rows = []
    for branch in ("a", "b"):
        delays = delay_values(cfg, branch)
        rows = _run_points(
            _delay_point, [(cfg, branch, float(d), rabi) for d in delays], workers
        )
        for r in rows:
            r["branch"] = branch
        all_rows.extend(rows)
    fields = (
        "branch",
        "delay_over_tau0",
        "p0",
        "p_minus",
        "p_plus",
        "phase0",
        "phase_minus",
        "phase_plus",
    )
    out = [{k: r[k] for k in fields} for r in all_rows]
    _write_csv(out_dir / "fig6.csv", _comments(cfg, "fig6", rabi), fields, out)
    if plot_script:
        _write_plot_script(
            out_dir / "plot_fig6.py", "fig6.csv", "delay_over_tau0",
            ("p0", "p_minus", "p_plus"),
        )
    return all_rows


def run_custom(cfg: AppConfig, out_dir: Path, rabi=False, workers=1, plot_script=False) -> list[dict]:
    """Bandwidth sweep over an explicit [sweep] start/stop/num range."""
    if cfg.sweep.start is None or cfg.sweep.stop is None:
        raise ExperimentError("custom sweep needs [sweep] start and stop")
    return run_fig2(cfg, out_dir, rabi=rabi, workers=workers, plot_script=plot_script)


def _run_fig5a(cfg, out, rabi=False, workers=1, plot_script=False):
    return run_fig5(cfg, out, "a", rabi, workers, plot_script)


def _run_fig5b(cfg, out, rabi=False, workers=1, plot_script=False):
    return run_fig5(cfg, out, "b", rabi, workers, plot_script)


EXPERIMENTS = {
    "fig2": run_fig2,
    "fig3": run_fig3,
    "fig4": run_fig4,
    "fig5a": _run_fig5a,
    "fig5b": _run_fig5b,
    "fig6": run_fig6,
    "custom": run_custom,
}


def run_experiment(name: str, cfg: AppConfig, out_dir, rabi=False, workers=1, plot_script=False):
    if name not in EXPERIMENTS:
        raise ExperimentError(
            f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}"
        )
    return EXPERIMENTS[name](
        cfg, Path(out_dir), rabi=rabi, workers=workers, plot_script=plot_script
    )


# ---------------------------------------------------------------------------
# analysis helpers used by the delay-scan checks


def delay_scan_closed_form(
    params: PhysicalParams, branch: str, delays, t_obs: float
) -> np.ndarray:
    """First-order prediction of the delay scans with both carriers at phase 0."""
    out = np.empty(len(delays))
    for i, d in enumerate(delays):
        if branch == "a":
            target = target_from_pulse_phases(params, 0.0, 0.0, 0.0, float(d))
        else:
            target = target_from_pulse_phases(params, 0.0, 0.0, float(d), 0.0)
        out[i] = orientation_closed_form(target, params, t_obs)
    return out


def fit_period(x: np.ndarray, y: np.ndarray, omega_guess: float) -> float:
    """Least-squares period of y ~ a + b*cos(w x) + c*sin(w x), w near the guess.

    Deterministic shrinking grid search over w with a linear fit per candidate.
    """
    def residual(w):
        basis = np.column_stack([np.ones_like(x), np.cos(w * x), np.sin(w * x)])
        coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
        return float(np.linalg.norm(basis @ coef - y))

    best = omega_guess
    span = 0.1 * omega_guess
    for _ in range(4):
        grid = np.linspace(best - span, best + span, 401)
        vals = [residual(w) for w in grid]
        best = float(grid[int(np.argmin(vals))])
        span /= 20.0
    return 2.0 * math.pi / best
