"""Fast self-check suite behind ``polariton-ctl validate``.

Each check re-derives a structural invariant of the model or the pulse-area
machinery at runtime and prints one PASS/FAIL line; returns the number of
failures.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernel
from .config import DEFAULT_MODEL
from .dynamics import magnus1_state, propagate, propagate_jc
from .model import (
    SQRT2_OVER_2,
    build_drive_coupling,
    build_jc_hamiltonian,
    build_jc_hamiltonian_product,
    build_rabi_hamiltonian,
    cos_theta_matrix,
    polariton_eigenvalues,
    to_internal_units,
    total_excitation_product,
)
from .observables import fidelity_to_target, orientation, orientation_closed_form
from .pulses import (
    TargetState,
    amplitude_condition,
    design_for_target,
    pulse_area_spectral,
    pulse_area_time_domain,
    synthesize_field,
)
from .targets import brute_force_max_orientation


def _checks():
    params = to_internal_units(DEFAULT_MODEL)

    def hermiticity():
        for op in (
            build_jc_hamiltonian(params),
            build_drive_coupling(params),
            cos_theta_matrix(params, "entangled"),
            cos_theta_matrix(params, "product"),
            *build_rabi_hamiltonian(params),
        ):
            if np.abs(op.data - op.data.conj().T).max() > 1e-12:
                return False
        return True

    def eigen_consistency():
        h = build_jc_hamiltonian_product(params).data
        block = h[np.ix_([1, params.n_max + 1], [1, params.n_max + 1])]
        vals, vecs = np.linalg.eigh(block)
        wm, wp = polariton_eigenvalues(params, 0)
        return (
            abs(vals[0] - wm) < 1e-12
            and abs(vals[1] - wp) < 1e-12
            and abs(abs(vecs[0, 0]) - SQRT2_OVER_2) < 1e-12
        )

    def excitation_conserved():
        h = build_jc_hamiltonian_product(params).data
        n_op = total_excitation_product(params).data
        return np.abs(h @ n_op - n_op @ h).max() < 1e-12

    def area_conditions():
        t = TargetState(math.sqrt(2) / 2, 0.5, 0.5)
        tm, tp = amplitude_condition(t)
        return abs(tm - math.sqrt(2) * math.pi / 8) < 1e-12 and tm == tp

    def round_trip():
        target = TargetState(math.sqrt(2) / 2, 0.5, 0.5, 0.3, -0.7)
        dw = 0.1 * params.coupling
        design = design_for_target(target, params, dw)
        field = synthesize_field(design)
        lo, hi = field.support()
        wm, wp = polariton_eigenvalues(params, 0)
        mags = amplitude_condition(target)
        for w, mag in zip((wm, wp), mags):
            theta = pulse_area_time_domain(field, w, lo, hi, params.mu01)
            if abs(abs(theta) - mag) > 1e-3:
                return False
            spectral = pulse_area_spectral(design, w)
            if abs(theta - spectral) > 1e-6 * abs(theta):
                return False
        return True

    def kernel_agreement():
        from . import _kernel_py

        rng = np.random.default_rng(7)
        dim = 6
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        hs = np.ascontiguousarray((a + a.conj().T) / 2)
        b = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        hd = np.ascontiguousarray((b + b.conj().T) / 2)
        psi0 = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi0 = np.ascontiguousarray(psi0 / np.linalg.norm(psi0))
        n = 200
        field = np.ascontiguousarray(np.sin(0.3 * np.arange(2 * n + 1)))
        _, _, ref = _kernel_py.rk4_propagate(hs, hd, field, psi0, 0.01, n, 50)
        _, _, got = kernel.rk4_propagate(hs, hd, field, psi0, 0.01, n, 50)
        return bool(np.abs(ref - got).max() < 1e-12)

    def short_unitarity_and_transfer():
        target = TargetState(math.sqrt(2) / 2, 0.5, 0.5, 0.3, -0.7, t_f=60.0)
        design = design_for_target(target, params, 0.3 * params.coupling)
        field = synthesize_field(design)
        traj = propagate_jc(params, field, field.support()[0], target.t_f)
        ok_norm = np.abs(traj.norms() - 1.0).max() < 1e-9
        fid = fidelity_to_target(traj.final_state(), target, params)
        return ok_norm and fid > 0.995

    def orientation_forms_agree():
        target = TargetState(math.sqrt(2) / 2, 0.5, 0.5, 1.1, 0.4)
        wm, wp = polariton_eigenvalues(params, 0)
        for t in (0.0, 3.7, 111.0):
            closed = float(orientation_closed_form(target, params, t))
            quad = orientation(target.schrodinger_coefficients(t, (wm, wp)), params, "entangled3")
            if abs(closed - quad) > 1e-12:
                return False
        return True

    def lagrange_optimum():
        _, fmax, diag = brute_force_max_orientation(grid_n=200)
        return abs(fmax - math.sqrt(1.0 / 3.0)) < 1e-4 and abs(diag["balance_residual"]) < 1e-3

    def magnus_limit():
        state = magnus1_state(0.0, 0.0)
        return abs(state.coefficients[0] - 1.0) < 1e-15

    return [
        ("hermiticity of tagged operators", hermiticity),
        ("dressed doublet from product-basis block", eigen_consistency),
        ("excitation number conserved", excitation_conserved),
        ("amplitude condition closed form", area_conditions),
        ("field synthesis round trip", round_trip),
        ("compiled and fallback kernels agree", kernel_agreement),
        ("unitarity and transfer on a short run", short_unitarity_and_transfer),
        ("orientation closed form equals quadratic form", orientation_forms_agree),
        ("brute-force orientation optimum", lagrange_optimum),
        ("first-order state at zero area", magnus_limit),
    ]


def run_validation(echo=print) -> int:
    failures = 0
    for name, fn in _checks():
        try:
            ok = fn()
        except Exception as exc:  # a crash is a failure with a reason
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        echo(f"{'PASS' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1
    return failures
