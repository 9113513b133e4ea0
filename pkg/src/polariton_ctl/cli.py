"""Command line interface: run sweeps, design fields, validate invariants."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import kernel
from .config import ConfigError, load_config
from .experiments import EXPERIMENTS, run_experiment
from .model import to_internal_units
from .pulses import PulseDesignError, design_for_target, synthesize_field
from .targets import general_target, max_orientation_target
from .units import TAU0_INTERNAL
from .validate import run_validation


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polariton-ctl",
        description="Pulse design and propagation for a cavity-dressed molecular rotor",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a parameter sweep experiment")
    run.add_argument("experiment", choices=sorted(EXPERIMENTS))
    run.add_argument("--config", type=Path, default=None)
    run.add_argument("--out", type=Path, default=Path("."))
    run.add_argument("--rabi", action="store_true", help="use the full product-basis model")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument(
        "--plot-script",
        action="store_true",
        help="also write a standalone matplotlib script next to the CSV",
    )

    design = sub.add_parser("design", help="design a field for a target state")
    design.add_argument("--config", type=Path, default=None)
    design.add_argument("--target", default=None, help="c0,c_minus,c_plus amplitudes")
    design.add_argument("--phases", default=None, help="phi_minus,phi_plus")
    design.add_argument("--t-f-over-tau0", type=float, default=None)
    design.add_argument("--delta-omega-over-g", type=float, default=None)
    design.add_argument("--emit-field", type=Path, default=None, metavar="CSV")

    sub.add_parser("validate", help="run the invariant self-checks")
    return parser


def _floats(raw: str) -> tuple[float, ...]:
    return tuple(float(x) for x in raw.replace(",", " ").split())


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    rows = run_experiment(
        args.experiment,
        cfg,
        args.out,
        rabi=args.rabi,
        workers=args.workers,
        plot_script=args.plot_script,
    )
    print(
        f"{args.experiment}: {len(rows)} points written to {args.out} "
        f"({kernel.backend_name()} kernel)"
    )
    return 0


def _cmd_design(args) -> int:
    cfg = load_config(args.config)
    params = to_internal_units(cfg.model)
    t_f = (
        args.t_f_over_tau0
        if args.t_f_over_tau0 is not None
        else cfg.target.t_f_over_tau0
    ) * TAU0_INTERNAL
    if args.target is not None:
        amplitudes = _floats(args.target)
        phases = _floats(args.phases) if args.phases else cfg.target.phases
        target = general_target(amplitudes, phases, t_f)
    elif cfg.target.kind == "explicit":
        target = general_target(cfg.target.amplitudes, cfg.target.phases, t_f)
    else:
        target = max_orientation_target(
            t_f, cfg.target.phases[0], cfg.target.phases[1], params
        )
    ratio = (
        args.delta_omega_over_g
        if args.delta_omega_over_g is not None
        else cfg.pulse.delta_omega_over_g
    )
    design = design_for_target(
        target, params, ratio * params.coupling, cfg.pulse.tau_minus, cfg.pulse.tau_plus
    )
    if cfg.pulse.theta_minus is not None or cfg.pulse.theta_plus is not None:
        mags = design.area_magnitudes
        design = dataclasses.replace(
            design,
            area_magnitudes=(
                cfg.pulse.theta_minus if cfg.pulse.theta_minus is not None else mags[0],
                cfg.pulse.theta_plus if cfg.pulse.theta_plus is not None else mags[1],
            ),
        )
    print(f"area magnitudes: {design.area_magnitudes}")
    print(f"area phases:     {design.area_phases}")
    print(f"carriers:        {design.carrier_frequencies}")
    print(f"carrier phases:  {design.carrier_phases}")
    print(f"peak amplitudes: {design.field_amplitudes}")
    print(f"durations:       {design.durations}")
    if args.emit_field is not None:
        field = synthesize_field(design)
        lo, hi = field.support()
        ts = np.linspace(lo, hi, 20001)
        vals = field(ts)
        args.emit_field.parent.mkdir(parents=True, exist_ok=True)
        with open(args.emit_field, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "field"])
            for t, v in zip(ts, vals):
                writer.writerow([f"{t:.12e}", f"{v:.12e}"])
        print(f"field written to {args.emit_field}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "design":
            return _cmd_design(args)
        if args.command == "validate":
            failures = run_validation()
            return 0 if failures == 0 else 1
    except (ConfigError, PulseDesignError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
