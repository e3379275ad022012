"""Hamiltonians, observables and closed-form ground-state values of the two models.

``one_qubit``
    H_T = X + J Z, prepared from H_0 = Z, observable Z.
``schwinger_two_site``
    Two-site massless lattice Schwinger model after Gauss-law elimination
    and the Jordan-Wigner map: H_T = (X0 X1 + Y0 Y1)/2 + J Z0 with
    J = g^2 a^2 / 2, prepared from H_0 = (Z0 - Z1)/2, observable
    Zbar = (Z0 - Z1)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError
from .hamlib import PauliHamiltonian
from .statevec import StateVector, basis_state

ONE_QUBIT = "one_qubit"
SCHWINGER = "schwinger_two_site"
KINDS = (ONE_QUBIT, SCHWINGER)


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    j: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        if not math.isfinite(self.j):
            raise ConfigurationError(f"coupling must be finite, got {self.j!r}")

    @property
    def n_physical(self) -> int:
        return 1 if self.kind == ONE_QUBIT else 2


def target_hamiltonian(spec: ModelSpec) -> PauliHamiltonian:
    if spec.kind == ONE_QUBIT:
        return PauliHamiltonian({"X": 1.0, "Z": spec.j})
    return PauliHamiltonian({"XX": 0.5, "YY": 0.5, "ZI": spec.j})


def initial_hamiltonian(spec: ModelSpec) -> PauliHamiltonian:
    if spec.kind == ONE_QUBIT:
        return PauliHamiltonian({"Z": 1.0})
    return PauliHamiltonian({"ZI": 0.5, "IZ": -0.5})


def observable(spec: ModelSpec) -> PauliHamiltonian:
    if spec.kind == ONE_QUBIT:
        return PauliHamiltonian({"Z": 1.0})
    return PauliHamiltonian({"ZI": 0.5, "IZ": -0.5})


def initial_state(spec: ModelSpec) -> StateVector:
    """Ground state of the initial Hamiltonian: |1> or |1>_0 |0>_1."""
    return basis_state(spec.n_physical, "1" if spec.kind == ONE_QUBIT else "10")


def analytic_ground(spec: ModelSpec) -> tuple[float, float]:
    """Exact ground energy and ground-state expectation of the observable."""
    j = spec.j
    root = math.sqrt(1.0 + j * j)
    if spec.kind == ONE_QUBIT:
        return -root, -j / root
    w = j * j + j * root
    return -root, -w / (w + 1.0)


def measurement_variance(spec: ModelSpec) -> float:
    """Variance of the observable's outcomes when the exact ground state is measured.

    Both observables square to one on the ground state's support (Z always,
    Zbar on the charge-neutral states 01 and 10), so the variance is
    ``1 - vev**2``.
    """
    _, vev = analytic_ground(spec)
    return 1.0 - vev * vev
