"""Benchmark the compiled RK4 kernel against the pure-numpy fallback.

Runs the reference propagation (dressed-basis model, designed two-pulse
field at delta_omega = 0.1 g) through both kernels and reports steps/second.

    python benchmarks/bench_kernel.py [--steps N] [--dim-product]
"""

import argparse
import math
import time

import numpy as np

from polariton_ctl import (
    LabParams,
    design_for_target,
    synthesize_field,
    to_internal_units,
)
from polariton_ctl import _kernel_py
from polariton_ctl.dynamics import jc_system
from polariton_ctl.model import build_rabi_hamiltonian, product_index
from polariton_ctl.targets import target_from_pulse_phases

try:
    from polariton_ctl import _kernel

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False


def reference_problem(n_steps: int, product: bool):
    params = to_internal_units(LabParams(0.20286, 0.715, 0.1, j_max=4, n_max=5))
    target = target_from_pulse_phases(params, 0.0, math.pi / 9)
    design = design_for_target(target, params, 0.1 * params.coupling)
    field = synthesize_field(design)
    if product:
        hs_op, hd_op = build_rabi_hamiltonian(params)
        psi0 = np.zeros(params.dim_product, dtype=np.complex128)
        psi0[product_index(0, 0, params.n_max)] = 1.0
    else:
        hs_op, hd_op = jc_system(params)
        psi0 = np.zeros(params.dim_entangled, dtype=np.complex128)
        psi0[0] = 1.0
    hs = np.ascontiguousarray(hs_op.data)
    hd = np.ascontiguousarray(hd_op.data)
    dt = 0.008
    t = -400.0 + 0.5 * dt * np.arange(2 * n_steps + 1)
    samples = np.ascontiguousarray(field(t))
    return hs, hd, samples, np.ascontiguousarray(psi0), dt


def time_kernel(impl, args, n_steps, repeats=3):
    best = math.inf
    result = None
    for _ in range(repeats):
        tic = time.perf_counter()
        _, _, final = impl.rk4_propagate(*args, n_steps, 10**9)
        best = min(best, time.perf_counter() - tic)
        result = final
    return best, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--steps", type=int, default=20000)
    parser.add_argument(
        "--dim-product",
        action="store_true",
        help="benchmark the 30-state product basis instead of the 13-state dressed basis",
    )
    args = parser.parse_args()

    hs, hd, samples, psi0, dt = reference_problem(args.steps, args.dim_product)
    print(f"dimension {hs.shape[0]}, {args.steps} RK4 steps, dt={dt}")

    t_py, ref = time_kernel(_kernel_py, (hs, hd, samples, psi0, dt), args.steps)
    print(f"pure-python: {t_py:8.3f} s   {args.steps / t_py:12.0f} steps/s")

    if HAVE_COMPILED:
        t_cy, got = time_kernel(_kernel, (hs, hd, samples, psi0, dt), args.steps)
        print(f"compiled:    {t_cy:8.3f} s   {args.steps / t_cy:12.0f} steps/s")
        print(f"speedup:     {t_py / t_cy:8.1f}x")
        print(f"max |difference|: {np.abs(ref - got).max():.3e}")
    else:
        print("compiled kernel not built; showing fallback only")


if __name__ == "__main__":
    main()
