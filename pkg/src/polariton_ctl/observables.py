"""Fidelity, orientation, populations and phases of propagated states."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import QuantumState, Trajectory
from .model import (
    PhysicalParams,
    cos_theta_matrix,
    entangled_to_product,
    orientation_matrix_elements,
    polariton_eigenvalues,
)
from .pulses import TargetState, wrap_phase


class ObservableError(ValueError):
    """Incompatible states or bases."""


def _coeffs(state) -> np.ndarray:
    if isinstance(state, QuantumState):
        return state.coefficients
    return np.asarray(state, dtype=np.complex128)


def embed_target(target: TargetState, params: PhysicalParams, basis: str, t: float) -> np.ndarray:
    """Schrodinger-picture target amplitudes at time t in the requested basis."""
    omegas = polariton_eigenvalues(params, 0)
    three = target.schrodinger_coefficients(t, omegas)
    if basis in ("entangled", "entangled3"):
        dim = params.dim_entangled if basis == "entangled" else 3
        out = np.zeros(dim, dtype=np.complex128)
        out[:3] = three
        return out
    if basis == "product":
        v = entangled_to_product(params)
        out = np.zeros(v.shape[1], dtype=np.complex128)
        out[:3] = three
        return v @ out
    raise ObservableError(f"unknown basis {basis!r}")


def fidelity(psi, target) -> float:
    """|<target|psi>|^2 for same-basis, normalized states."""
    a = _coeffs(psi)
    b = _coeffs(target)
    if isinstance(psi, QuantumState) and isinstance(target, QuantumState):
        if psi.basis != target.basis:
            raise ObservableError(
                f"basis mismatch: {psi.basis!r} vs {target.basis!r}"
            )
    if a.shape != b.shape:
        raise ObservableError("states live in different spaces")
    return float(abs(np.vdot(b, a)) ** 2)


def fidelity_to_target(
    state: QuantumState, target: TargetState, params: PhysicalParams
) -> float:
    """Fidelity of a propagated state against an analytic three-state target."""
    ref = embed_target(target, params, state.basis, state.time)
    return float(abs(np.vdot(ref, state.coefficients)) ** 2)


def orientation(state, params: PhysicalParams, basis: str | None = None) -> float:
    """<cos(theta)> as a matrix quadratic form."""
    c = _coeffs(state)
    if basis is None:
        basis = state.basis if isinstance(state, QuantumState) else "entangled"
    if basis == "entangled3":
        m = cos_theta_matrix(params, "entangled").data[:3, :3]
    else:
        m = cos_theta_matrix(params, basis).data
    return float(np.real(np.vdot(c, m @ c)))


def orientation_closed_form(target: TargetState, params: PhysicalParams, t) -> np.ndarray:
    """Orientation of a freely evolving three-state target at time(s) t.

    ``2 * c0 * sum_l c_l * M_l * cos(w_l t + phi_l)`` with
    ``M_-+ = -+ sqrt(6)/6``; equals the quadratic form on the same state.
    """
    t = np.asarray(t, dtype=float)
    mm, mp = orientation_matrix_elements(params)
    wm, wp = polariton_eigenvalues(params, 0)
    return (
        2.0 * target.c0 * target.c_minus * mm * np.cos(wm * t + target.phi_minus)
        + 2.0 * target.c0 * target.c_plus * mp * np.cos(wp * t + target.phi_plus)
    )


def free_orientation(
    coeffs: np.ndarray,
    params: PhysicalParams,
    h_static,
    times,
    t_ref: float = 0.0,
    basis: str = "entangled",
) -> np.ndarray:
    """<cos(theta)> under field-free evolution from Schrodinger amplitudes at t_ref.

    Exact: the state is advanced by the eigenphases of the static Hamiltonian
    (plain drift phases when it is diagonal), so no integration is needed once
    the field is off.
    """
    times = np.asarray(times, dtype=float)
    h = np.asarray(h_static.data if hasattr(h_static, "data") else h_static)
    m = cos_theta_matrix(params, basis).data[: len(coeffs), : len(coeffs)]
    if np.abs(h - np.diag(np.diag(h))).max() == 0.0:
        w = np.real(np.diag(h))[: len(coeffs)]
        amps = coeffs
        rot = None
    else:
        w, rot = np.linalg.eigh(h)
        amps = rot.conj().T @ coeffs
    evolved = np.exp(-1j * np.outer(times - t_ref, w)) * amps[None, :]  # (nt, dim)
    states = evolved if rot is None else evolved @ rot.T
    return np.real(np.einsum("ti,ij,tj->t", states.conj(), m, states))


def locate_orientation_extremum(
    coeffs: np.ndarray,
    params: PhysicalParams,
    h_static,
    t_start: float,
    window: float | None = None,
    n_grid: int = 4001,
    t_ref: float = 0.0,
    basis: str = "entangled",
) -> tuple[float, float]:
    """(time, value) of the largest |<cos(theta)>| over one beat period.

    Scans a dense grid then refines the peak parabolically; ``window``
    defaults to one beat period 2*pi/(w_+ - w_-) = pi/g.
    """
    if window is None:
        wm, wp = polariton_eigenvalues(params, 0)
        window = 2.0 * math.pi / (wp - wm)
    times = np.linspace(t_start, t_start + window, n_grid)
    vals = free_orientation(coeffs, params, h_static, times, t_ref, basis)
    k = int(np.argmax(np.abs(vals)))
    if 0 < k < n_grid - 1:
        y0, y1, y2 = np.abs(vals[k - 1 : k + 2])
        denom = y0 - 2.0 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        dt = times[1] - times[0]
        t_pk = times[k] + shift * dt
        v_pk = free_orientation(
            coeffs, params, h_static, np.array([t_pk]), t_ref, basis
        )[0]
        return float(t_pk), float(v_pk)
    return float(times[k]), float(vals[k])


def populations_and_phases(
    state: QuantumState, omegas=None
) -> tuple[np.ndarray, np.ndarray]:
    """Populations |C_l|^2 and interaction-picture phases arg(C_l) in (-pi, pi]."""
    if state.picture == "interaction" or omegas is None:
        c = state.coefficients
    else:
        c = state.interaction_coefficients(omegas)
    return np.abs(c) ** 2, wrap_phase(np.angle(c))


@dataclass(frozen=True)
class ObservableRecord:
    time: float
    fidelity: float
    orientation: float
    p0: float
    p_minus: float
    p_plus: float
    phase0: float
    phase_minus: float
    phase_plus: float

    def __post_init__(self):
        if not -1e-9 <= self.fidelity <= 1.0 + 1e-9:
            raise ObservableError("fidelity out of [0, 1]")
        if abs(self.orientation) > 1.0 + 1e-9:
            raise ObservableError("orientation out of [-1, 1]")


CSV_FIELDS = (
    "time",
    "fidelity",
    "orientation",
    "p0",
    "p_minus",
    "p_plus",
    "phase0",
    "phase_minus",
    "phase_plus",
)


def trajectory_records(
    traj: Trajectory, params: PhysicalParams, target: TargetState | None = None
) -> list[ObservableRecord]:
    """Per-snapshot observables of a dressed-basis trajectory."""
    if traj.omegas is None:
        raise ObservableError("need a diagonal field-free Hamiltonian for phases")
    records = []
    for i, t in enumerate(traj.times):
        state = traj.state(i)
        pops, phases = populations_and_phases(state, traj.omegas)
        fid = fidelity_to_target(state, target, params) if target is not None else 0.0
        records.append(
            ObservableRecord(
                time=float(t),
                fidelity=fid,
                orientation=orientation(state, params, traj.basis),
                p0=float(pops[0]),
                p_minus=float(pops[1]),
                p_plus=float(pops[2]),
                phase0=float(phases[0]),
                phase_minus=float(phases[1]),
                phase_plus=float(phases[2]),
            )
        )
    return records


def write_records_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for r in records:
            writer.writerow([f"{getattr(r, f):.12e}" for f in CSV_FIELDS])
