"""Plain-text key-value configuration: sections [model], [pulse], [target], [sweep]."""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path

from .units import LabParams

DEFAULT_MODEL = LabParams(
    b_cm1=0.20286, mu_debye=0.715, g_over_omega01=0.1, j_max=4, n_max=5
)


class ConfigError(ValueError):
    """Malformed configuration file."""


@dataclass(frozen=True)
class PulseConfig:
    delta_omega_over_g: float = 0.1
    tau_minus: float = 0.0  # internal time units
    tau_plus: float = 0.0
    phi_minus: float = 0.0
    phi_plus: float = math.pi / 9.0
    theta_minus: float | None = None  # explicit area magnitudes, optional
    theta_plus: float | None = None


@dataclass(frozen=True)
class TargetConfig:
    kind: str = "max_orientation"  # or "explicit"
    amplitudes: tuple[float, float, float] = (math.sqrt(2.0) / 2.0, 0.5, 0.5)
    # phases produced by carrier phases (0, pi/9) at zero delay; they satisfy
    # the simultaneous-alignment condition for the orientation maximum
    phases: tuple[float, float] = (math.pi / 2.0, math.pi / 9.0 - math.pi / 2.0)
    t_f_over_tau0: float = 50.0


@dataclass(frozen=True)
class SweepConfig:
    experiment: str = "fig2"
    start: float | None = None
    stop: float | None = None
    num: int | None = None
    snapshot_stride: int = 100
    dt: float | None = None


@dataclass(frozen=True)
class AppConfig:
    model: LabParams = DEFAULT_MODEL
    pulse: PulseConfig = PulseConfig()
    target: TargetConfig = TargetConfig()
    sweep: SweepConfig = SweepConfig()

    def resolved(self) -> dict[str, str]:
        """Flat key=value view of every setting, for reproducibility headers."""
        out: dict[str, str] = {}
        for section, obj in (
            ("model", self.model),
            ("pulse", self.pulse),
            ("target", self.target),
            ("sweep", self.sweep),
        ):
            for key, val in vars(obj).items():
                out[f"{section}.{key}"] = repr(val)
        return dict(sorted(out.items()))


def _get(parser, section, key, cast, default):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}={raw!r}: {exc}") from exc


def _floats(raw: str) -> tuple[float, ...]:
    return tuple(float(x) for x in raw.replace(",", " ").split())


def load_config(path: str | Path | None) -> AppConfig:
    """Read an INI-style configuration; missing keys fall back to defaults."""
    if path is None:
        return AppConfig()
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")

    known = {"model", "pulse", "target", "sweep"}
    unknown = set(parser.sections()) - known
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")

    model = LabParams(
        b_cm1=_get(parser, "model", "b_cm1", float, DEFAULT_MODEL.b_cm1),
        mu_debye=_get(parser, "model", "mu_debye", float, DEFAULT_MODEL.mu_debye),
        g_over_omega01=_get(
            parser, "model", "g_over_omega01", float, DEFAULT_MODEL.g_over_omega01
        ),
        j_max=_get(parser, "model", "j_max", int, DEFAULT_MODEL.j_max),
        n_max=_get(parser, "model", "n_max", int, DEFAULT_MODEL.n_max),
    )
    dp = PulseConfig()
    pulse = PulseConfig(
        delta_omega_over_g=_get(
            parser, "pulse", "delta_omega_over_g", float, dp.delta_omega_over_g
        ),
        tau_minus=_get(parser, "pulse", "tau_minus", float, dp.tau_minus),
        tau_plus=_get(parser, "pulse", "tau_plus", float, dp.tau_plus),
        phi_minus=_get(parser, "pulse", "phi_minus", float, dp.phi_minus),
        phi_plus=_get(parser, "pulse", "phi_plus", float, dp.phi_plus),
        theta_minus=_get(parser, "pulse", "theta_minus", float, None),
        theta_plus=_get(parser, "pulse", "theta_plus", float, None),
    )
    dtg = TargetConfig()
    amplitudes = _get(parser, "target", "amplitudes", _floats, dtg.amplitudes)
    phases = _get(parser, "target", "phases", _floats, dtg.phases)
    if len(amplitudes) != 3:
        raise ConfigError("[target] amplitudes needs exactly three values")
    if len(phases) != 2:
        raise ConfigError("[target] phases needs exactly two values")
    target = TargetConfig(
        kind=_get(parser, "target", "kind", str, dtg.kind),
        amplitudes=tuple(amplitudes),
        phases=tuple(phases),
        t_f_over_tau0=_get(parser, "target", "t_f_over_tau0", float, dtg.t_f_over_tau0),
    )
    if target.kind not in ("max_orientation", "explicit"):
        raise ConfigError(f"[target] kind={target.kind!r} not recognized")
    ds = SweepConfig()
    sweep = SweepConfig(
        experiment=_get(parser, "sweep", "experiment", str, ds.experiment),
        start=_get(parser, "sweep", "start", float, None),
        stop=_get(parser, "sweep", "stop", float, None),
        num=_get(parser, "sweep", "num", int, None),
        snapshot_stride=_get(
            parser, "sweep", "snapshot_stride", int, ds.snapshot_stride
        ),
        dt=_get(parser, "sweep", "dt", float, None),
    )
    return AppConfig(model=model, pulse=pulse, target=target, sweep=sweep)
