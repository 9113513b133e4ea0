"""Pulse-area control of a single-molecule rotational polariton.

Builds the dressed-state model of a rigid rotor strongly coupled to one
cavity mode, designs composite Gaussian pulse pairs that steer the lowest
three dressed states to an arbitrary coherent superposition, and verifies the
designs by direct numerical integration of the driven dynamics.
"""

from .config import AppConfig, load_config
from .dynamics import (
    PropagationError,
    QuantumState,
    Trajectory,
    magnus1_state,
    propagate,
    propagate_jc,
    propagate_rabi,
)
from .model import (
    OperatorMatrix,
    PhysicalParams,
    build_drive_coupling,
    build_jc_hamiltonian,
    build_jc_hamiltonian_product,
    build_rabi_hamiltonian,
    cos_theta_matrix,
    polariton_eigenvalues,
    to_internal_units,
)
from .observables import (
    fidelity,
    fidelity_to_target,
    orientation,
    orientation_closed_form,
    populations_and_phases,
)
from .pulses import (
    PulseDesign,
    TargetState,
    amplitude_condition,
    design_for_target,
    phase_condition,
    pulse_area_spectral,
    pulse_area_time_domain,
    synthesize_field,
)
from .targets import (
    brute_force_max_orientation,
    general_target,
    max_orientation_target,
    target_from_pulse_phases,
)
from .units import LabParams, UnitSystem

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "LabParams",
    "OperatorMatrix",
    "PhysicalParams",
    "PropagationError",
    "PulseDesign",
    "QuantumState",
    "TargetState",
    "Trajectory",
    "UnitSystem",
    "amplitude_condition",
    "brute_force_max_orientation",
    "build_drive_coupling",
    "build_jc_hamiltonian",
    "build_jc_hamiltonian_product",
    "build_rabi_hamiltonian",
    "cos_theta_matrix",
    "design_for_target",
    "fidelity",
    "fidelity_to_target",
    "general_target",
    "load_config",
    "magnus1_state",
    "max_orientation_target",
    "orientation",
    "orientation_closed_form",
    "phase_condition",
    "polariton_eigenvalues",
    "populations_and_phases",
    "propagate",
    "propagate_jc",
    "propagate_rabi",
    "pulse_area_spectral",
    "pulse_area_time_domain",
    "synthesize_field",
    "target_from_pulse_phases",
    "to_internal_units",
]
