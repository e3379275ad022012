"""Dense statevector with gate application, expectation values and sampling.

Qubit 0 is the least significant bit of the amplitude index.  Ancilla
qubits sit above the physical register, so "all ancillas in |0>" is simply
the leading ``2**n_physical`` block of the amplitude array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DegenerateProtocolError, ValidationError
from .hamlib import MAX_QUBITS, PauliHamiltonian, to_dense

NORM_TOL = 1e-10
UNITARY_TOL = 1e-12

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class StateVector:
    """Normalized amplitudes of an ``n_qubits`` register.

    Gate methods return new states; the amplitude array of an instance is
    read-only.
    """

    __slots__ = ("_amps", "_n")

    def __init__(self, amps, *, normalize: bool = False):
        a = np.array(amps, dtype=complex).reshape(-1)
        dim = a.size
        if dim < 2 or dim & (dim - 1):
            raise ConfigurationError(f"amplitude count {dim} is not 2**n with n >= 1")
        n = dim.bit_length() - 1
        if n > MAX_QUBITS:
            raise ConfigurationError(f"{n} qubits exceeds the limit of {MAX_QUBITS}")
        norm = float(np.linalg.norm(a))
        if normalize:
            if norm == 0.0:
                raise ValidationError("cannot normalize the zero vector")
            a /= norm
        elif abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm {norm!r} differs from 1")
        a.setflags(write=False)
        self._amps = a
        self._n = n

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    @property
    def n_qubits(self) -> int:
        return self._n

    @property
    def dim(self) -> int:
        return self._amps.size

    def probabilities(self) -> np.ndarray:
        return np.abs(self._amps) ** 2

    def inner(self, other: StateVector) -> complex:
        """<self|other>."""
        return complex(np.vdot(self._amps, other._amps))

    def fidelity(self, other: StateVector) -> float:
        return abs(self.inner(other)) ** 2

    def tensor(self, upper: StateVector) -> StateVector:
        """This register as the low qubits, ``upper`` as the high qubits."""
        return StateVector(np.kron(upper.amps, self._amps))

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self._n})"


@dataclass(frozen=True)
class RegisterLayout:
    n_physical: int
    n_ancilla: int = 0

    def __post_init__(self):
        if self.n_physical < 1 or self.n_ancilla < 0:
            raise ConfigurationError(f"invalid layout {self}")

    @property
    def n_qubits(self) -> int:
        return self.n_physical + self.n_ancilla

    def ancilla_qubit(self, j: int) -> int:
        if not 0 <= j < self.n_ancilla:
            raise ConfigurationError(f"ancilla {j} outside 0..{self.n_ancilla - 1}")
        return self.n_physical + j

    def check(self, state: StateVector):
        if state.n_qubits != self.n_qubits:
            raise ConfigurationError(
                f"layout expects {self.n_qubits} qubits, state has {state.n_qubits}"
            )


@dataclass(frozen=True)
class ShotTally:
    """Measurement counts keyed by bitstring; character ``k`` is qubit ``k``."""

    counts: dict[str, int]
    n_shots: int
    seed: int | None = None
    n_qubits: int = 0

    def index_counts(self) -> np.ndarray:
        out = np.zeros(2**self.n_qubits, dtype=np.int64)
        for bits, c in self.counts.items():
            out[bits_to_index(bits)] = c
        return out


def bits_to_index(bits: str) -> int:
    return sum(1 << q for q, b in enumerate(bits) if b == "1")


def index_to_bits(index: int, n_qubits: int) -> str:
    return "".join("1" if (index >> q) & 1 else "0" for q in range(n_qubits))


def basis_state(n_qubits: int, bits: str) -> StateVector:
    if len(bits) != n_qubits or set(bits) - {"0", "1"}:
        raise ConfigurationError(f"bitstring {bits!r} does not describe {n_qubits} qubits")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[bits_to_index(bits)] = 1.0
    return StateVector(amps)


def zero_state(n_qubits: int) -> StateVector:
    return basis_state(n_qubits, "0" * n_qubits)


def _check_unitary(u: np.ndarray, k: int) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2**k, 2**k):
        raise ConfigurationError(f"expected a {2**k}x{2**k} matrix, got {u.shape}")
    if not np.allclose(u.conj().T @ u, np.eye(2**k), rtol=0, atol=UNITARY_TOL):
        raise ValidationError("operator is not unitary to 1e-12")
    return u


def _apply_matrix(tensor: np.ndarray, n: int, targets: Sequence[int], u: np.ndarray) -> np.ndarray:
    # tensor has shape (2,)*n with axis n-1-q holding qubit q; u's index has targets[0] as LSB
    k = len(targets)
    axes = [n - 1 - q for q in reversed(targets)]
    moved = np.moveaxis(tensor, axes, range(n - k, n))
    shape = moved.shape
    out = (moved.reshape(-1, 2**k) @ u.T).reshape(shape)
    return np.moveaxis(out, range(n - k, n), axes)


def _check_targets(n: int, targets: Sequence[int]):
    if len(set(targets)) != len(targets):
        raise ConfigurationError(f"repeated target qubits {list(targets)}")
    for q in targets:
        if not 0 <= q < n:
            raise ConfigurationError(f"qubit {q} outside a {n}-qubit register")


def apply_unitary(state: StateVector, targets: Sequence[int], u: np.ndarray) -> StateVector:
    """Apply a ``2**k x 2**k`` unitary to the listed qubits (``targets[0]`` is its LSB)."""
    n = state.n_qubits
    _check_targets(n, targets)
    u = _check_unitary(u, len(targets))
    t = state.amps.reshape((2,) * n)
    return StateVector(_apply_matrix(t, n, list(targets), u).reshape(-1))


def apply_one_qubit(state: StateVector, q: int, u: np.ndarray) -> StateVector:
    return apply_unitary(state, [q], u)


def apply_controlled_block(
    state: StateVector, control: int, targets: Sequence[int], u: np.ndarray
) -> StateVector:
    """Apply ``u`` to ``targets`` on the control=1 branch only.

    Any global phase carried by ``u`` becomes a relative phase between the
    two control branches, so it is kept as given.
    """
    n = state.n_qubits
    if control in targets:
        raise ConfigurationError(f"control {control} overlaps targets {list(targets)}")
    _check_targets(n, [control, *targets])
    u = _check_unitary(u, len(targets))
    t = np.array(state.amps).reshape((2,) * n)
    ax = n - 1 - control
    branch = np.take(t, 1, axis=ax)
    # removing the control axis shifts every higher-numbered qubit's axis down by one
    sub_targets = [q - 1 if q > control else q for q in targets]
    new_branch = _apply_matrix(branch, n - 1, sub_targets, u)
    idx = [slice(None)] * n
    idx[ax] = 1
    t[tuple(idx)] = new_branch
    return StateVector(t.reshape(-1))


def expectation(state: StateVector, obs: PauliHamiltonian) -> float:
    """<psi|O|psi> with ``obs`` acting on the lowest ``obs.n_qubits`` qubits."""
    k = obs.n_qubits
    if k > state.n_qubits:
        raise ConfigurationError(f"observable on {k} qubits, state has {state.n_qubits}")
    if obs.is_diagonal:
        probs = state.probabilities().reshape(-1, 2**k)
        return float(probs.sum(axis=0) @ obs.diagonal())
    m = to_dense(obs).entries
    phys = state.amps.reshape(-1, 2**k)
    val = np.einsum("ai,ij,aj->", phys.conj(), m, phys)
    return float(val.real)


def project_ancillas_zero(
    state: StateVector, layout: RegisterLayout
) -> tuple[float, StateVector]:
    """Probability of the all-ancillas-zero branch and that branch, renormalized.

    The returned state lives on the physical register only.
    """
    layout.check(state)
    block = state.amps[: 2**layout.n_physical]
    p = float(np.vdot(block, block).real)
    if p <= 0.0:
        raise DegenerateProtocolError("all-ancillas-zero branch has zero probability")
    return p, StateVector(block / np.sqrt(p))


def sample_shots(state: StateVector, n_shots: int, seed: int | None) -> ShotTally:
    """Draw ``n_shots`` independent full-register measurements.

    The counts are drawn in one multinomial call, which has the same
    distribution as tallying individual shots.
    """
    if n_shots < 1:
        raise ConfigurationError("n_shots must be >= 1")
    rng = np.random.default_rng(seed)
    probs = state.probabilities()
    counts = rng.multinomial(n_shots, probs / probs.sum())
    nz = np.flatnonzero(counts)
    tally = {index_to_bits(int(i), state.n_qubits): int(counts[i]) for i in nz}
    return ShotTally(tally, n_shots, seed, state.n_qubits)
