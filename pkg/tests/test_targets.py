import math

import numpy as np
import pytest

from polariton_ctl import (
    design_for_target,
    general_target,
    max_orientation_target,
    propagate_jc,
    synthesize_field,
    target_from_pulse_phases,
)
from polariton_ctl.model import SQRT6_OVER_6
from polariton_ctl.observables import fidelity_to_target
from polariton_ctl.pulses import PulseDesignError
from polariton_ctl.targets import (
    MAX_ORIENTATION,
    brute_force_max_orientation,
    simultaneous_alignment_gap,
)
from polariton_ctl.units import TAU0_INTERNAL

SQRT2_2 = math.sqrt(2) / 2


def test_max_orientation_amplitudes(params):
    t = max_orientation_target(0.0, 0.5, -0.5, params, check=False)
    assert (t.c0, t.c_minus, t.c_plus) == (SQRT2_2, 0.5, 0.5)


def test_lambda_max_value():
    assert math.hypot(SQRT6_OVER_6, SQRT6_OVER_6) == pytest.approx(
        MAX_ORIENTATION, rel=1e-14
    )


def test_alignment_gap_small_for_reference_phases(params):
    target = target_from_pulse_phases(params, 0.0, math.pi / 9)
    gap = simultaneous_alignment_gap(params, target.phi_minus, target.phi_plus)
    assert gap < 1e-5


def test_alignment_warning_for_incommensurate_phases(params):
    # both target phases zero leave the two beat terms misaligned
    with pytest.warns(UserWarning, match="orientation peak"):
        max_orientation_target(0.0, 0.0, 0.0, params)


def test_brute_force_reaches_lagrange_bound():
    best, fmax, diag = brute_force_max_orientation(grid_n=200)
    assert fmax == pytest.approx(MAX_ORIENTATION, abs=1e-4)
    assert abs(diag["balance_residual"]) < 1e-3
    assert abs(diag["lambda"] - fmax) == 0.0
    for r in diag["stationarity_residuals"]:
        assert abs(r) < 5e-3
    # argmax amplitudes sit at (sqrt(2)/2, 1/2, 1/2)
    assert best[0] == pytest.approx(SQRT2_2, abs=5e-3)
    assert best[1] == pytest.approx(0.5, abs=5e-3)
    assert best[2] == pytest.approx(0.5, abs=5e-3)


def test_brute_force_symmetric_in_branches():
    _, f1, _ = brute_force_max_orientation(grid_n=150, m_minus=0.3, m_plus=0.5)
    _, f2, _ = brute_force_max_orientation(grid_n=150, m_minus=0.5, m_plus=0.3)
    assert f1 == pytest.approx(f2, rel=1e-12)


def test_brute_force_zero_at_pure_ground():
    # f vanishes when all weight sits in the ground state
    best, fmax, _ = brute_force_max_orientation(grid_n=100, m_minus=0.0, m_plus=0.0)
    assert fmax == 0.0


def test_brute_force_grid_floor():
    with pytest.raises(ValueError):
        brute_force_max_orientation(grid_n=50)


def test_general_target_normalizes():
    t = general_target((1.0, 1.0, 1.0), (0.1, 0.2), t_f=1.0)
    assert t.c0 == pytest.approx(1 / math.sqrt(3), rel=1e-14)
    assert t.c0**2 + t.c_minus**2 + t.c_plus**2 == pytest.approx(1.0, abs=1e-14)


def test_general_target_passthrough():
    t = general_target((SQRT2_2, 0.5, 0.5))
    assert (t.c0, t.c_minus, t.c_plus) == pytest.approx((SQRT2_2, 0.5, 0.5), rel=1e-15)


def test_general_target_rejects_zero():
    with pytest.raises(PulseDesignError):
        general_target((0.0, 0.0, 0.0))


def test_target_from_pulse_phases_reference(params):
    t = target_from_pulse_phases(params, 0.0, math.pi / 9)
    assert t.phi_minus == pytest.approx(math.pi / 2, abs=1e-14)
    assert t.phi_plus == pytest.approx(math.pi / 9 - math.pi / 2, abs=1e-14)


def test_target_design_round_trip_carrier_phases(params):
    # inverse map feeds the designer back to the original pulse parameters
    t = target_from_pulse_phases(params, 0.25, -1.3, tau_minus=1.5, tau_plus=4.0)
    design = design_for_target(t, params, 0.01, tau_minus=1.5, tau_plus=4.0)
    assert design.carrier_phases[0] == pytest.approx(0.25, abs=1e-12)
    assert design.carrier_phases[1] == pytest.approx(-1.3, abs=1e-12)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_target_end_to_end(params, seed):
    """Designed fields steer the system to arbitrary targets at F > 0.999."""
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.1, 1.0, size=3)
    a /= np.linalg.norm(a)
    t_f = 50 * TAU0_INTERNAL
    target = general_target(a, (rng.uniform(-3, 3), rng.uniform(-3, 3)), t_f)
    design = design_for_target(target, params, 0.1 * params.coupling)
    field = synthesize_field(design)
    traj = propagate_jc(params, field, field.support()[0], t_f)
    assert fidelity_to_target(traj.final_state(), target, params) > 0.999
