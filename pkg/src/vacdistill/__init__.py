"""Statevector simulation of adiabatic vacuum preparation and ancilla-twirl distillation."""

from .distill import TwirlConfig, TwirlRecord, run_distillation
from .errors import (
    ConfigurationError,
    DegenerateProtocolError,
    NumericalError,
    ValidationError,
    VacDistillError,
)
from .evolve import Schedule, run_adiabatic
from .hamlib import PauliHamiltonian, eig_hermitian, expm_exact, to_dense
from .models import ModelSpec, analytic_ground, observable, target_hamiltonian
from .statevec import RegisterLayout, StateVector, basis_state, expectation

__all__ = [
    "ConfigurationError",
    "DegenerateProtocolError",
    "ModelSpec",
    "NumericalError",
    "PauliHamiltonian",
    "RegisterLayout",
    "Schedule",
    "StateVector",
    "TwirlConfig",
    "TwirlRecord",
    "ValidationError",
    "VacDistillError",
    "analytic_ground",
    "basis_state",
    "eig_hermitian",
    "expectation",
    "expm_exact",
    "observable",
    "run_adiabatic",
    "run_distillation",
    "target_hamiltonian",
    "to_dense",
]
