"""Decoupling verification: exact first-order oracle, dense evolution, simulated experiments."""

from .dense import (
    Propagator,
    ResidualScan,
    apply_pulse_error,
    average_hamiltonian,
    build_dense,
    evolve_schedule,
    phase_distance,
    residual_scaling,
    target_unitary,
)
from .experiment import FidelityRecord, PrepSetting, fidelity_experiment, prep_settings, records_to_csv
from .hamiltonian import ErrorHamiltonian, hamiltonian_shape, random_hamiltonian, term_string
from .oracle import PauliPolynomial, conjugation_sign, first_order_average, term_signs

__all__ = [
    "ErrorHamiltonian",
    "FidelityRecord",
    "PauliPolynomial",
    "PrepSetting",
    "Propagator",
    "ResidualScan",
    "apply_pulse_error",
    "average_hamiltonian",
    "build_dense",
    "conjugation_sign",
    "evolve_schedule",
    "fidelity_experiment",
    "first_order_average",
    "hamiltonian_shape",
    "phase_distance",
    "prep_settings",
    "random_hamiltonian",
    "records_to_csv",
    "residual_scaling",
    "target_unitary",
    "term_signs",
    "term_string",
]
