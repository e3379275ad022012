"""Ancilla-controlled twirling that filters excited states out of an approximate vacuum.

One round on ancilla ``a``: Hadamard on ``a``, then ``i exp(-i theta H_T)``
on the physical register controlled by ``a``, then Hadamard on ``a`` again.
An eigenstate with energy E ends up on the ``a = 0`` branch with amplitude
``(1 + i exp(-i theta E)) / 2``, which equals one when ``theta E = pi/2``.
Theta is re-derived every round from the energy of the current
all-ancillas-zero ("active") branch, so no exact ground energy is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConfigurationError, DegenerateProtocolError
from .evolve import TrotterSplit
from .hamlib import PauliHamiltonian, expm_exact
from .models import ModelSpec, target_hamiltonian
from .statevec import (
    HADAMARD,
    RegisterLayout,
    StateVector,
    apply_controlled_block,
    apply_one_qubit,
    expectation,
    project_ancillas_zero,
    zero_state,
)

UNDERFLOW = 1e-12
ZERO_ENERGY = 1e-12  # |E| below this is treated as a vanishing energy estimate
U_MODES = ("exact", "trotter")


@dataclass(frozen=True)
class TwirlConfig:
    rounds: int = 1
    u_mode: str = "trotter"
    steps: int = 100

    def __post_init__(self):
        if self.rounds < 0:
            raise ConfigurationError("rounds must be >= 0")
        if self.steps < 1:
            raise ConfigurationError("steps must be >= 1")
        if self.u_mode not in U_MODES:
            raise ConfigurationError(f"u_mode must be one of {U_MODES}, got {self.u_mode!r}")


@dataclass(frozen=True)
class TwirlRecord:
    round: int
    e0j: float
    theta_j: float
    active_prob: float
    cond_expect: float


def _active(state: StateVector, layout: RegisterLayout) -> tuple[float, StateVector]:
    p, phys = project_ancillas_zero(state, layout)
    if p < UNDERFLOW:
        raise DegenerateProtocolError(f"active probability {p:.3e} below {UNDERFLOW:g}")
    return p, phys


def estimate_ground_energy(state: StateVector, layout: RegisterLayout, ht: PauliHamiltonian) -> float:
    return expectation(_active(state, layout)[1], ht)


def conditional_expectation(state: StateVector, layout: RegisterLayout, obs: PauliHamiltonian) -> float:
    return expectation(_active(state, layout)[1], obs)


def theta_for(e0j: float) -> float:
    if not math.isfinite(e0j) or abs(e0j) < ZERO_ENERGY:
        raise DegenerateProtocolError(f"cannot fix theta from energy estimate {e0j!r}")
    return math.pi / (2.0 * e0j)


def twirl_unitary(ht: PauliHamiltonian, theta: float, cfg: TwirlConfig) -> np.ndarray:
    """The controlled block ``i exp(-i theta H_T)``, exact or as Trotter sub-steps."""
    if cfg.u_mode == "exact":
        u = expm_exact(ht, theta)
    else:
        u = np.linalg.matrix_power(TrotterSplit.diagonal_first(ht).step_unitary(theta / cfg.steps), cfg.steps)
    return 1j * u


def twirl_round(
    state: StateVector,
    layout: RegisterLayout,
    ht: PauliHamiltonian,
    theta: float,
    ancilla: int,
    cfg: TwirlConfig,
) -> StateVector:
    layout.check(state)
    a = layout.ancilla_qubit(ancilla)
    if ht.n_qubits != layout.n_physical:
        raise ConfigurationError(f"H_T acts on {ht.n_qubits} qubits, layout has {layout.n_physical}")
    p_used = float(state.probabilities().reshape(-1, 2**a)[1::2].sum())
    if p_used > UNDERFLOW:
        raise ConfigurationError(f"ancilla {ancilla} is already in use (P(1) = {p_used:.3e})")
    u = twirl_unitary(ht, theta, cfg)
    state = apply_one_qubit(state, a, HADAMARD)
    state = apply_controlled_block(state, a, list(range(layout.n_physical)), u)
    return apply_one_qubit(state, a, HADAMARD)


def distillation(
    psi0: StateVector,
    spec: ModelSpec,
    cfg: TwirlConfig,
    obs: PauliHamiltonian,
) -> Iterator[tuple[TwirlRecord, StateVector]]:
    """Yield the record and full-register state before any twirl and after each round."""
    if psi0.n_qubits != spec.n_physical:
        raise ConfigurationError(f"psi0 has {psi0.n_qubits} qubits, model needs {spec.n_physical}")
    ht = target_hamiltonian(spec)
    layout = RegisterLayout(spec.n_physical, cfg.rounds)
    state = psi0.tensor(zero_state(cfg.rounds)) if cfg.rounds else psi0

    def record(j: int) -> TwirlRecord:
        p, phys = _active(state, layout)
        e0j = expectation(phys, ht)
        return TwirlRecord(j, e0j, theta_for(e0j), p, expectation(phys, obs))

    rec = record(0)
    yield rec, state
    for j in range(1, cfg.rounds + 1):
        state = twirl_round(state, layout, ht, rec.theta_j, j - 1, cfg)
        rec = record(j)
        yield rec, state


def run_distillation(
    psi0: StateVector,
    spec: ModelSpec,
    cfg: TwirlConfig,
    obs: PauliHamiltonian,
) -> list[TwirlRecord]:
    return [rec for rec, _ in distillation(psi0, spec, cfg, obs)]
