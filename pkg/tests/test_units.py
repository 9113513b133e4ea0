import math

import pytest

from polariton_ctl import LabParams, to_internal_units
from polariton_ctl.model import ModelError
from polariton_ctl.units import DEBYE_TO_AU, TAU0_INTERNAL, UnitSystem

# hand-computed oracles (CODATA factors): 1 D = 3.33564e-30 C m,
# 1 atomic dipole unit = 8.478354e-30 C m
DEBYE_TO_AU_ORACLE = 3.33564095e-30 / 8.4783536255e-30
OMEGA01_REFERENCE = 76423511388.85  # 4*pi*c*(20.286 1/m), rad/s


def test_debye_conversion_factor():
    assert DEBYE_TO_AU == pytest.approx(DEBYE_TO_AU_ORACLE, rel=1e-8)


def test_omega01_definition(params):
    # omega01 = 2B holds by construction of the internal units
    assert params.rotational_constant == 0.5
    assert params.omega01 == 1.0
    assert params.cavity_frequency == 1.0


def test_tau0_internal_is_two_pi(params):
    assert params.tau0 == pytest.approx(2.0 * math.pi, abs=0)
    assert TAU0_INTERNAL == pytest.approx(2.0 * math.pi, abs=0)


def test_tau0_lab_value(params):
    # quoted rotational period 82.23 ps; CODATA chain gives 82.215 ps
    tau0_s = params.units.tau0_seconds
    assert tau0_s == pytest.approx(82.23e-12, rel=1e-2)
    assert tau0_s == pytest.approx(82.215e-12, rel=1e-4)


def test_dipole_conversion(params):
    # mu = 0.715 D in atomic units, and mu01 = mu/sqrt(3)
    assert params.dipole == pytest.approx(0.715 * DEBYE_TO_AU_ORACLE, rel=1e-8)
    assert params.mu01 == pytest.approx(0.715 * DEBYE_TO_AU_ORACLE / math.sqrt(3), rel=1e-8)


def test_omega01_lab(params):
    assert params.units.omega01_rad_per_s == pytest.approx(OMEGA01_REFERENCE, rel=1e-6)


def test_time_round_trip(params):
    u = params.units
    assert u.time_from_seconds(u.time_to_seconds(123.4)) == pytest.approx(123.4, rel=1e-14)


def test_nonpositive_inputs_rejected():
    with pytest.raises(ModelError):
        to_internal_units(LabParams(-1.0, 0.715, 0.1))
    with pytest.raises(ModelError):
        to_internal_units(LabParams(0.2, 0.0, 0.1))


def test_pulse_duration_lab_value(params):
    # delta_omega = 0.1 g = 0.01 internal -> tau = 100 internal units
    tau_lab = params.units.time_to_seconds(100.0)
    assert tau_lab == pytest.approx(1.3085e-9, rel=1e-3)


@pytest.mark.xfail(
    reason="quoted duration 1.38 ns is 5.4%% from 1/(0.1 g) = 1.3085 ns; the "
    "quoted peak field squared (1.35e9) is consistent with 1.3085 ns, so the "
    "1.38 ns figure cannot be reproduced by the stated conversion chain",
    strict=True,
)
def test_pulse_duration_matches_quoted_value(params):
    tau_lab = params.units.time_to_seconds(100.0)
    assert tau_lab == pytest.approx(1.38e-9, rel=1e-2)


def test_peak_field_squared_lab(params):
    # designed amplitude sqrt(2*pi)/(4*tau*mu01) at delta_omega = 0.1 g
    e_int = math.sqrt(2.0 * math.pi) / (4.0 * 100.0 * params.mu01)
    e2 = params.units.field_squared_v2_per_m2(e_int)
    assert e2 == pytest.approx(1.35e9, rel=1e-2)


def test_intensity_conversion(params):
    e_int = math.sqrt(2.0 * math.pi) / (4.0 * 100.0 * params.mu01)
    # 0.5*eps0*c*E^2 for E ~ 3.67e4 V/m
    assert params.units.intensity_w_per_cm2(e_int) == pytest.approx(178.5, rel=1e-2)


def test_unit_system_standalone():
    u = UnitSystem(b_cm1=0.5, mu_debye=1.0)
    assert u.field_to_v_per_m(0.0) == 0.0
    assert u.seconds_per_time_unit > 0
