"""Conversions between laboratory units and the internal unit system.

Internally hbar = 1 and the J=0 -> J=1 rotational transition frequency
omega01 = 2B is the unit of angular frequency, so energies are measured in
units of 2B and times in units of 1/(2B).  The rotational revival period
tau0 = pi/B is then exactly 2*pi internal time units.  Dipole moments are
stored in atomic units (e*a0); the matching field unit is
hbar*omega01/(e*a0), so that (dipole * field) is an energy in units of 2B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as _const

DEBYE_TO_CM = 1e-21 / _const.c  # coulomb meter per debye
ATOMIC_DIPOLE_CM = _const.physical_constants["atomic unit of electric dipole mom."][0]
DEBYE_TO_AU = DEBYE_TO_CM / ATOMIC_DIPOLE_CM
BOHR_RADIUS = _const.physical_constants["Bohr radius"][0]

TAU0_INTERNAL = 2.0 * math.pi  # rotational period pi/B in internal time units


@dataclass(frozen=True)
class LabParams:
    """Laboratory-frame inputs: wavenumber rotational constant and Debye dipole."""

    b_cm1: float
    mu_debye: float
    g_over_omega01: float
    j_max: int = 4
    n_max: int = 5


@dataclass(frozen=True)
class UnitSystem:
    """Conversion factors between internal and laboratory units."""

    b_cm1: float
    mu_debye: float

    @property
    def omega01_rad_per_s(self) -> float:
        # omega01 = 2B with B = 2*pi*c*btilde in angular-frequency units
        return 4.0 * math.pi * _const.c * (self.b_cm1 * 100.0)

    @property
    def seconds_per_time_unit(self) -> float:
        return 1.0 / self.omega01_rad_per_s

    @property
    def tau0_seconds(self) -> float:
        return TAU0_INTERNAL * self.seconds_per_time_unit

    @property
    def dipole_au(self) -> float:
        return self.mu_debye * DEBYE_TO_AU

    @property
    def field_unit_v_per_m(self) -> float:
        # one internal field unit times one atomic dipole unit = hbar*omega01
        return _const.hbar * self.omega01_rad_per_s / (_const.e * BOHR_RADIUS)

    def time_to_seconds(self, t_internal: float) -> float:
        return t_internal * self.seconds_per_time_unit

    def time_from_seconds(self, t_seconds: float) -> float:
        return t_seconds / self.seconds_per_time_unit

    def field_to_v_per_m(self, field_internal: float) -> float:
        return field_internal * self.field_unit_v_per_m

    def field_squared_v2_per_m2(self, field_internal: float) -> float:
        return self.field_to_v_per_m(field_internal) ** 2

    def intensity_w_per_cm2(self, field_internal: float) -> float:
        e_lab = self.field_to_v_per_m(field_internal)
        return 0.5 * _const.epsilon_0 * _const.c * e_lab**2 / 1e4
