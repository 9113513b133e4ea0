"""Target-state constructors and the brute-force orientation optimum."""

from __future__ import annotations

import math
import warnings

import numpy as np

from .model import SQRT6_OVER_6, PhysicalParams, polariton_eigenvalues
from .pulses import PulseDesignError, TargetState, wrap_phase

MAX_ORIENTATION = math.sqrt(1.0 / 3.0)
OPTIMAL_AMPLITUDES = (math.sqrt(2.0) / 2.0, 0.5, 0.5)


def general_target(amplitudes, phases=(0.0, 0.0), t_f: float = 0.0) -> TargetState:
    """Normalized three-state target from raw amplitudes and excited phases."""
    a = np.abs(np.asarray(amplitudes, dtype=float))
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        raise PulseDesignError("amplitudes cannot all vanish")
    a = a / norm
    return TargetState(
        c0=float(a[0]),
        c_minus=float(a[1]),
        c_plus=float(a[2]),
        phi_minus=float(phases[0]),
        phi_plus=float(phases[1]),
        t_f=t_f,
    )


def simultaneous_alignment_gap(
    params: PhysicalParams, phi_minus: float, phi_plus: float, n_grid: int = 20001
) -> float:
    """How far the field-free orientation peak falls short of sqrt(1/3).

    The two beat terms reach full alignment only for commensurate phase
    choices; this scans the joint recurrence window of the two transition
    frequencies and returns ``sqrt(1/3) - max|<cos(theta)>|``.
    """
    from .observables import orientation_closed_form  # local: avoid cycle

    target = TargetState(*OPTIMAL_AMPLITUDES, phi_minus, phi_plus)
    wm, wp = polariton_eigenvalues(params, 0)
    # joint recurrence window: many beat periods of the slower difference
    window = 20.0 * 2.0 * math.pi / (wp - wm)
    t = np.linspace(0.0, window, n_grid)
    vals = np.abs(orientation_closed_form(target, params, t))
    k = int(np.argmax(vals))
    peak = vals[k]
    if 0 < k < len(t) - 1:  # parabolic refinement removes the grid bias
        y0, y1, y2 = vals[k - 1 : k + 2]
        denom = y0 - 2.0 * y1 + y2
        if denom != 0.0:
            shift = 0.5 * (y0 - y2) / denom
            t_pk = t[k] + shift * (t[1] - t[0])
            peak = float(np.abs(orientation_closed_form(target, params, t_pk)))
    return float(MAX_ORIENTATION - peak)


def max_orientation_target(
    t_f: float,
    phi_minus: float,
    phi_plus: float,
    params: PhysicalParams | None = None,
    check: bool = True,
) -> TargetState:
    """Target with amplitudes (sqrt(2)/2, 1/2, 1/2) maximizing orientation.

    When ``params`` is given, warns if the chosen phases cannot align both
    beat terms within the scan window (the orientation peak then stays below
    sqrt(1/3)).
    """
    target = TargetState(
        *OPTIMAL_AMPLITUDES, phi_minus=phi_minus, phi_plus=phi_plus, t_f=t_f
    )
    if check and params is not None:
        gap = simultaneous_alignment_gap(params, phi_minus, phi_plus)
        if gap > 1e-4:
            warnings.warn(
                f"phases leave the orientation peak {gap:.2e} below sqrt(1/3); "
                "pick phases that let both beat terms align",
                stacklevel=2,
            )
    return target


def target_from_pulse_phases(
    params: PhysicalParams,
    carrier_phase_minus: float,
    carrier_phase_plus: float,
    tau_minus: float = 0.0,
    tau_plus: float = 0.0,
    t_f: float = 0.0,
    amplitudes=OPTIMAL_AMPLITUDES,
) -> TargetState:
    """Target that a resonant two-pulse field with these parameters produces.

    Inverse of the design map: ``phi_- = varphi_- - w_- tau_- + pi/2`` and
    ``phi_+ = varphi_+ - w_+ tau_+ - pi/2`` (the branches differ because their
    ground-state dipole elements have opposite signs).
    """
    wm, wp = polariton_eigenvalues(params, 0)
    return general_target(
        amplitudes,
        phases=(
            float(wrap_phase(carrier_phase_minus - wm * tau_minus + math.pi / 2)),
            float(wrap_phase(carrier_phase_plus - wp * tau_plus - math.pi / 2)),
        ),
        t_f=t_f,
    )


def brute_force_max_orientation(
    grid_n: int = 200,
    m_minus: float = SQRT6_OVER_6,
    m_plus: float = SQRT6_OVER_6,
) -> tuple[tuple[float, float, float], float, dict]:
    """Grid search of f = 2 c0 (c- |M-| + c+ |M+|) over the probability simplex.

    Phase factors are set optimally (each beat cosine aligned with the sign of
    its matrix element), so only amplitudes are searched.  Returns the argmax
    amplitudes, the maximum, and Lagrange-stationarity diagnostics.
    """
    if grid_n < 100:
        raise ValueError("need at least 100 grid points per simplex dimension")
    p = np.linspace(0.0, 1.0, grid_n + 1)
    p0, pm = np.meshgrid(p, p, indexing="ij")
    pp = 1.0 - p0 - pm
    valid = pp >= -1e-15
    pp = np.clip(pp, 0.0, None)
    c0, cm, cp = np.sqrt(p0), np.sqrt(pm), np.sqrt(pp)
    f = 2.0 * c0 * (cm * abs(m_minus) + cp * abs(m_plus))
    f[~valid] = -np.inf
    k = int(np.argmax(f))
    i, j = divmod(k, grid_n + 1)
    best = (float(c0[i, j]), float(cm[i, j]), float(cp[i, j]))
    fmax = float(f[i, j])

    lam = fmax  # stationarity multiplier equals the optimum value
    residuals = (
        best[1] * abs(m_minus) + best[2] * abs(m_plus) - lam * best[0],
        best[0] * abs(m_minus) - lam * best[1],
        best[0] * abs(m_plus) - lam * best[2],
    )
    diagnostics = {
        "lambda": lam,
        "stationarity_residuals": residuals,
        "balance_residual": best[0] ** 2 - best[1] ** 2 - best[2] ** 2,
    }
    return best, fmax, diagnostics
