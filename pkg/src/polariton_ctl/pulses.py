"""Pulse-area conditions and composite Gaussian field synthesis.

A target superposition over ``{|0;0>, |-;0>, |+;0>}`` fixes the magnitude and
argument of the two complex pulse areas

    theta_l(t) = mu0_tilde * integral E(t') exp(-i w_l t') dt',

with ``mu0_tilde = sqrt(2)/2 * mu01``.  The magnitudes follow the arccos law
and the arguments follow ``arg(theta_l) = phi_l - pi/2``.  The two dressed
branches couple to the ground state with opposite-sign dipole elements, so
when a field is synthesized the upper-branch spectral phase carries an extra
pi relative to the lower branch; see :func:`design_for_target`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import SQRT2_OVER_2, PhysicalParams, polariton_eigenvalues

TWO_PI = 2.0 * math.pi
SUPPORT_SIGMAS = 8.0  # envelope tail < 1e-14 beyond this many durations


class PulseDesignError(ValueError):
    """Invalid target or pulse parameters."""


def wrap_phase(x):
    """Wrap an angle to the interval (-pi, pi]."""
    return math.pi - (math.pi - np.asarray(x)) % TWO_PI


@dataclass(frozen=True)
class TargetState:
    """Desired coherent superposition of the lowest three dressed states.

    Interaction-picture amplitudes are ``c0``, ``c_minus*exp(-i*phi_minus)``
    and ``c_plus*exp(-i*phi_plus)``; the ground-state phase is gauged to zero.
    """

    c0: float
    c_minus: float
    c_plus: float
    phi_minus: float = 0.0
    phi_plus: float = 0.0
    t_f: float = 0.0

    def __post_init__(self):
        if min(self.c0, self.c_minus, self.c_plus) < 0:
            raise PulseDesignError("amplitudes must be non-negative")
        if self.c0 > 1.0 + 1e-12:
            raise PulseDesignError("ground amplitude cannot exceed 1")
        norm = self.c0**2 + self.c_minus**2 + self.c_plus**2
        if abs(norm - 1.0) > 1e-12:
            raise PulseDesignError(f"amplitudes must be normalized, got norm^2={norm}")

    def coefficients(self) -> np.ndarray:
        """Interaction-picture coefficient vector (C0, C-, C+)."""
        return np.array(
            [
                self.c0,
                self.c_minus * np.exp(-1j * self.phi_minus),
                self.c_plus * np.exp(-1j * self.phi_plus),
            ],
            dtype=np.complex128,
        )

    def schrodinger_coefficients(self, t: float, omegas) -> np.ndarray:
        wm, wp = omegas
        return self.coefficients() * np.exp(-1j * np.array([0.0, wm, wp]) * t)


def amplitude_condition(target: TargetState) -> tuple[float, float]:
    """Pulse-area magnitudes |theta_-|, |theta_+| transferring |0;0> to target."""
    excited = math.hypot(target.c_minus, target.c_plus)
    if excited == 0.0:
        return 0.0, 0.0  # already in the ground state; no pulse needed
    theta0 = math.acos(min(target.c0, 1.0))
    return (
        target.c_minus * theta0 / excited,
        target.c_plus * theta0 / excited,
    )


def phase_condition(target: TargetState) -> tuple[float, float]:
    """Pulse-area arguments arg(theta_+-) = phi_+- - pi/2, wrapped to (-pi, pi]."""
    return (
        float(wrap_phase(target.phi_minus - math.pi / 2)),
        float(wrap_phase(target.phi_plus - math.pi / 2)),
    )


def total_area(theta_minus: complex, theta_plus: complex) -> float:
    return math.hypot(abs(theta_minus), abs(theta_plus))


def spectral_crosstalk(g: float, delta_omega: float) -> float:
    """Gaussian spectral weight of one pulse at the other carrier, exp(-(2g)^2/(2 dw^2))."""
    return math.exp(-((2.0 * g) ** 2) / (2.0 * delta_omega**2))


@dataclass(frozen=True)
class GaussianPulse:
    """amp * exp(-(t-tc)^2/(2 tau^2)) * cos(w*(t-tc) + phase)."""

    amplitude: float
    center_time: float
    duration: float
    carrier_frequency: float
    carrier_phase: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        u = t - self.center_time
        return self.amplitude * np.exp(-(u**2) / (2.0 * self.duration**2)) * np.cos(
            self.carrier_frequency * u + self.carrier_phase
        )


@dataclass(frozen=True)
class CompositeField:
    pulses: tuple[GaussianPulse, ...]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for p in self.pulses:
            out = out + p(t)
        return out

    def support(self, n_sigmas: float = SUPPORT_SIGMAS) -> tuple[float, float]:
        if not self.pulses:
            return 0.0, 0.0
        lo = min(p.center_time - n_sigmas * p.duration for p in self.pulses)
        hi = max(p.center_time + n_sigmas * p.duration for p in self.pulses)
        return lo, hi

    @property
    def max_carrier(self) -> float:
        return max((p.carrier_frequency for p in self.pulses), default=0.0)


@dataclass(frozen=True)
class PulseDesign:
    """Two-pulse design: one Gaussian per dressed branch.

    ``area_phases`` are the required arguments of the evaluated pulse areas,
    i.e. the spectral phases at the carriers; ``carrier_phases`` already fold
    in the branch sign and the center-time delay.
    """

    area_magnitudes: tuple[float, float]
    area_phases: tuple[float, float]
    carrier_frequencies: tuple[float, float]
    bandwidths: tuple[float, float]
    center_times: tuple[float, float]
    mu01: float
    coupling: float

    def __post_init__(self):
        if min(self.area_magnitudes) < 0:
            raise PulseDesignError("area magnitudes must be non-negative")
        if min(self.bandwidths) <= 0:
            raise PulseDesignError("bandwidths must be positive")
        if not self.narrow_band:
            warnings.warn(
                "bandwidth exceeds 0.3*g: spectral overlap of the two pulses "
                "degrades the three-state transfer",
                stacklevel=2,
            )

    @property
    def mu0_tilde(self) -> float:
        return SQRT2_OVER_2 * self.mu01

    @property
    def durations(self) -> tuple[float, float]:
        return tuple(1.0 / dw for dw in self.bandwidths)

    @property
    def narrow_band(self) -> bool:
        return max(self.bandwidths) <= 0.3 * self.coupling

    @property
    def carrier_phases(self) -> tuple[float, float]:
        return tuple(
            float(wrap_phase(beta + w * tc))
            for beta, w, tc in zip(
                self.area_phases, self.carrier_frequencies, self.center_times
            )
        )

    @property
    def field_amplitudes(self) -> tuple[float, float]:
        """Peak field per pulse, sqrt(2/pi) * |theta| / (tau * mu0_tilde)."""
        return tuple(
            math.sqrt(2.0 / math.pi) * mag / (tau * self.mu0_tilde)
            for mag, tau in zip(self.area_magnitudes, self.durations)
        )

    def as_field(self) -> CompositeField:
        pulses = []
        for amp, tau, w, tc, phi in zip(
            self.field_amplitudes,
            self.durations,
            self.carrier_frequencies,
            self.center_times,
            self.carrier_phases,
        ):
            if amp == 0.0:
                continue
            pulses.append(GaussianPulse(amp, tc, tau, w, phi))
        return CompositeField(tuple(pulses))


def design_for_target(
    target: TargetState,
    params: PhysicalParams,
    delta_omega: float,
    tau_minus: float = 0.0,
    tau_plus: float = 0.0,
) -> PulseDesign:
    """Build the resonant two-pulse design realizing ``target``.

    The lower branch takes the spectral phase from :func:`phase_condition`
    directly; the upper branch adds pi because its ground-state dipole element
    has the opposite sign, which the first-order transfer formula absorbs.
    """
    if delta_omega <= 0:
        raise PulseDesignError("bandwidth must be positive")
    mags = amplitude_condition(target)
    cond_m, cond_p = phase_condition(target)
    wm, wp = polariton_eigenvalues(params, 0)
    return PulseDesign(
        area_magnitudes=mags,
        area_phases=(cond_m, float(wrap_phase(cond_p + math.pi))),
        carrier_frequencies=(wm, wp),
        bandwidths=(delta_omega, delta_omega),
        center_times=(tau_minus, tau_plus),
        mu01=params.mu01,
        coupling=params.coupling,
    )


def synthesize_field(design: PulseDesign) -> CompositeField:
    """Time-domain composite field of a design."""
    return design.as_field()


def pulse_area_time_domain(
    field,
    omega: float,
    t0: float,
    t1: float,
    mu01: float,
    samples_per_period: int = 100,
) -> complex:
    """theta = mu0_tilde * integral_{t0}^{t1} E(t) exp(-i*omega*t) dt by Simpson.

    The grid resolves the fastest oscillation present (the evaluation
    frequency and, for composite fields, the carriers); fewer than 20 samples
    per period is rejected as under-resolved.
    """
    if t1 <= t0:
        raise PulseDesignError("need t1 > t0")
    if samples_per_period < 20:
        raise PulseDesignError(
            f"{samples_per_period} samples per period under-resolves the "
            "oscillatory integrand; need at least 20"
        )
    f_max = abs(omega)
    if hasattr(field, "max_carrier"):
        f_max = max(f_max, field.max_carrier)
    if f_max == 0.0:
        n = 64
    else:
        n = int(math.ceil((t1 - t0) * f_max / TWO_PI * samples_per_period))
        n = max(n, 64)
    if n % 2:
        n += 1
    t = np.linspace(t0, t1, n + 1)
    vals = np.asarray(field(t), dtype=float) * np.exp(-1j * omega * t)
    h = (t1 - t0) / n
    simpson = (h / 3.0) * (
        vals[0] + vals[-1] + 4.0 * vals[1:-1:2].sum() + 2.0 * vals[2:-1:2].sum()
    )
    return complex(SQRT2_OVER_2 * mu01 * simpson)


def pulse_area_spectral(design: PulseDesign, omega: float) -> complex:
    """theta at ``omega`` from the analytic Gaussian spectrum.

    Each real cosine pulse contributes a Gaussian line at +w_l (half the peak
    amplitude) and its mirror at -w_l; the mirror is retained for exactness
    although it is negligible for narrow-band designs.
    """
    total = 0.0j
    for amp, tau, w, tc, phi in zip(
        design.field_amplitudes,
        design.durations,
        design.carrier_frequencies,
        design.center_times,
        design.carrier_phases,
    ):
        if amp == 0.0:
            continue
        half = 0.5 * amp * math.sqrt(TWO_PI) * tau
        line = half * math.exp(-((omega - w) ** 2) * tau**2 / 2.0)
        mirror = half * math.exp(-((omega + w) ** 2) * tau**2 / 2.0)
        total += line * np.exp(1j * (phi - omega * tc))
        total += mirror * np.exp(-1j * (phi + omega * tc))
    return complex(design.mu0_tilde * total)
