import pytest

from polariton_ctl import LabParams, to_internal_units

REFERENCE_LAB = LabParams(b_cm1=0.20286, mu_debye=0.715, g_over_omega01=0.1, j_max=4, n_max=5)


@pytest.fixture(scope="session")
def params():
    """Reference model: resonant cavity, g = 0.1 omega01, default truncation."""
    return to_internal_units(REFERENCE_LAB)


@pytest.fixture(scope="session")
def params3():
    """Three-state model (no photon ladder)."""
    return to_internal_units(
        LabParams(b_cm1=0.20286, mu_debye=0.715, g_over_omega01=0.1, j_max=4, n_max=0)
    )
