"""Adiabatic schedule and second-order Suzuki-Trotter time stepping."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConfigurationError, ValidationError
from .hamlib import PauliHamiltonian, expm_commuting, expm_exact
from .models import ModelSpec, initial_hamiltonian, initial_state, target_hamiltonian
from .statevec import StateVector, apply_unitary

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Schedule:
    """Total time and step size; the step count is ``round(t_total / dt)``.

    When ``t_total`` is not a multiple of ``dt`` the step is shrunk to
    ``t_total / n_steps`` and the requested value kept in ``dt_requested``.
    """

    t_total: float
    dt: float
    dt_requested: float
    n_steps: int

    @classmethod
    def build(cls, t_total: float, dt: float) -> Schedule:
        if dt <= 0 or t_total < 0:
            raise ConfigurationError(f"need dt > 0 and t_total >= 0, got {dt=}, {t_total=}")
        n = round(t_total / dt)
        if t_total > 0 and n == 0:
            n = 1
        eff = t_total / n if n else dt
        if n and not math.isclose(eff, dt, rel_tol=1e-9):
            log.info("dt adjusted from %g to %g (%d steps)", dt, eff, n)
        return cls(t_total, eff, dt, n)

    def s_of_t(self, t: float) -> float:
        return t / self.t_total if self.t_total else 1.0

    def midpoints(self) -> np.ndarray:
        """Interpolation parameter used for each step: s at the step midpoint."""
        return (np.arange(self.n_steps) + 0.5) * self.dt / self.t_total


@dataclass(frozen=True)
class TrotterSplit:
    part_a: PauliHamiltonian
    part_b: PauliHamiltonian

    def __post_init__(self):
        if self.part_a.n_qubits != self.part_b.n_qubits:
            raise ConfigurationError("split parts act on different registers")
        for part in (self.part_a, self.part_b):
            terms = part.terms
            for i, p in enumerate(terms):
                for q in terms[i + 1 :]:
                    if not p.commutes_with(q):
                        raise ValidationError(f"{p.word} and {q.word} in one part do not commute")

    @classmethod
    def diagonal_first(cls, h: PauliHamiltonian) -> TrotterSplit:
        """Z-type terms in ``part_a``, everything else in ``part_b``."""
        diag = {w: c for w, c in h.as_dict().items() if set(w) <= {"I", "Z"}}
        rest = {w: c for w, c in h.as_dict().items() if w not in diag}
        return cls(PauliHamiltonian(diag, h.n_qubits), PauliHamiltonian(rest, h.n_qubits))

    @property
    def n_qubits(self) -> int:
        return self.part_a.n_qubits

    @property
    def full(self) -> PauliHamiltonian:
        return self.part_a + self.part_b

    def step_unitary(self, dt: float) -> np.ndarray:
        """exp(-iA dt/2) exp(-iB dt) exp(-iA dt/2) as a dense matrix."""
        ua = expm_commuting(self.part_a, dt / 2)
        return ua @ expm_commuting(self.part_b, dt) @ ua


def interpolate(h0: PauliHamiltonian, ht: PauliHamiltonian, s: float) -> PauliHamiltonian:
    if not 0.0 <= s <= 1.0:
        raise ConfigurationError(f"interpolation parameter {s} outside [0, 1]")
    return (1.0 - s) * h0 + s * ht


def trotter2_step(state: StateVector, split: TrotterSplit, dt: float) -> StateVector:
    return apply_unitary(state, list(range(split.n_qubits)), split.step_unitary(dt))


def adiabatic_trajectory(
    spec: ModelSpec,
    sched: Schedule,
    initial: StateVector | None = None,
    method: str = "trotter2",
) -> Iterator[tuple[float, StateVector]]:
    """Yield ``(t, state)`` at t = 0, dt, ..., T along H_A(s) = (1-s) H_0 + s H_T.

    ``method="exact"`` replaces each Trotter step by exp(-i H_A(s_mid) dt); it
    is the reference for splitting-error measurements.
    """
    if method not in ("trotter2", "exact"):
        raise ConfigurationError(f"unknown stepping method {method!r}")
    h0, ht = initial_hamiltonian(spec), target_hamiltonian(spec)
    state = initial_state(spec) if initial is None else initial
    targets = list(range(spec.n_physical))
    yield 0.0, state
    for k, s in enumerate(sched.midpoints()):
        h = interpolate(h0, ht, float(s))
        if method == "exact":
            u = expm_exact(h, sched.dt)
        else:
            u = TrotterSplit.diagonal_first(h).step_unitary(sched.dt)
        state = apply_unitary(state, targets, u)
        yield (k + 1) * sched.dt, state


def run_adiabatic(
    spec: ModelSpec,
    sched: Schedule,
    initial: StateVector | None = None,
    method: str = "trotter2",
) -> StateVector:
    """Approximate vacuum at s = 1; starts from the H_0 ground state unless ``initial`` is given."""
    state = initial
    for _, state in adiabatic_trajectory(spec, sched, initial, method):
        pass
    return state


def evolve_constant(
    state: StateVector,
    h: PauliHamiltonian,
    duration: float,
    dt: float,
    t0: float = 0.0,
    method: str = "trotter2",
) -> list[tuple[float, StateVector]]:
    """Evolution under a fixed Hamiltonian, one entry per step (second-order Trotter by default)."""
    if method not in ("trotter2", "exact"):
        raise ConfigurationError(f"unknown stepping method {method!r}")
    sched = Schedule.build(duration, dt)
    out = [(t0, state)]
    if sched.n_steps == 0:
        return out
    if method == "exact":
        u = expm_exact(h, sched.dt)
    else:
        u = TrotterSplit.diagonal_first(h).step_unitary(sched.dt)
    targets = list(range(h.n_qubits))
    for k in range(sched.n_steps):
        state = apply_unitary(state, targets, u)
        out.append((t0 + (k + 1) * sched.dt, state))
    return out
