"""Pure-numpy fixed-step RK4 loop; reference implementation of the compiled kernel."""

from __future__ import annotations

import numpy as np


def rk4_propagate(h_static, h_drive, field, psi0, dt, n_steps, stride):
    """Propagate psi0 over n_steps; field holds 2*n_steps+1 half-step samples.

    Returns (snapshot_steps, snapshots, psi_final); snapshots cover step 0,
    every stride-th step, and the final step.
    """
    dim = psi0.shape[0]
    if h_static.shape[0] != dim or h_drive.shape[0] != dim:
        raise ValueError("matrix dimensions must match the state")
    if field.shape[0] != 2 * n_steps + 1:
        raise ValueError("field must provide 2*n_steps+1 half-step samples")
    if stride < 1:
        raise ValueError("stride must be positive")

    psi = psi0.astype(np.complex128, copy=True)
    snap_steps = [0]
    snaps = [psi.copy()]

    def rhs(e, x):
        return -1j * ((h_static + e * h_drive) @ x)

    for m in range(n_steps):
        e0, em, e1 = field[2 * m], field[2 * m + 1], field[2 * m + 2]
        k1 = rhs(e0, psi)
        k2 = rhs(em, psi + 0.5 * dt * k1)
        k3 = rhs(em, psi + 0.5 * dt * k2)
        k4 = rhs(e1, psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (m + 1) % stride == 0 or m == n_steps - 1:
            snap_steps.append(m + 1)
            snaps.append(psi.copy())

    return (
        np.asarray(snap_steps, dtype=np.int64),
        np.asarray(snaps, dtype=np.complex128),
        psi,
    )
