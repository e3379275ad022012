"""Pauli-string Hamiltonians, dense realisation and an exact eigensolver.

Words are written qubit-ordered: ``word[k]`` is the letter acting on qubit
``k``.  Dense matrices use the little-endian convention of the rest of the
package (qubit 0 is the least significant bit of the basis index), so the
dense matrix of a word is ``kron(P[n-1], ..., P[1], P[0])``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .errors import ConfigurationError, NumericalError, ValidationError

MAX_QUBITS = 12
MERGE_THRESHOLD = 1e-15
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    coeff: float
    word: str

    def __post_init__(self):
        if not math.isfinite(self.coeff):
            raise ValidationError(f"non-finite coefficient {self.coeff!r}")
        if not self.word or set(self.word) - set(PAULI):
            raise ValidationError(f"bad Pauli word {self.word!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.word)

    @property
    def is_diagonal(self) -> bool:
        return set(self.word) <= {"I", "Z"}

    def matrix(self) -> np.ndarray:
        return self.coeff * reduce(np.kron, [PAULI[c] for c in reversed(self.word)])

    def commutes_with(self, other: PauliString) -> bool:
        # Pauli words commute iff they anticommute on an even number of sites
        clashes = sum(
            1 for a, b in zip(self.word, other.word) if "I" not in (a, b) and a != b
        )
        return clashes % 2 == 0


class PauliHamiltonian:
    """Real-weighted sum of Pauli words in canonical (merged) form.

    Build one from a mapping of words to coefficients::

        >>> h = PauliHamiltonian({"X": 1.0, "Z": 0.5})
        >>> h.coeff("Z")
        0.5

    Words that appear twice in ``terms`` are summed and coefficients below
    ``MERGE_THRESHOLD`` are dropped.  Instances are immutable; the arithmetic
    operators return new objects.
    """

    __slots__ = ("_terms", "_n_qubits")

    def __init__(
        self,
        terms: Mapping[str, float] | Iterable[PauliString] = (),
        n_qubits: int | None = None,
    ):
        if isinstance(terms, Mapping):
            items = [PauliString(float(c), w) for w, c in terms.items()]
        else:
            items = list(terms)
        lengths = {p.n_qubits for p in items}
        if n_qubits is None:
            if len(lengths) != 1:
                raise ConfigurationError(
                    "cannot infer qubit count" if not lengths else f"mixed word lengths {sorted(lengths)}"
                )
            n_qubits = lengths.pop()
        elif lengths - {n_qubits}:
            raise ConfigurationError(f"word lengths {sorted(lengths)} != n_qubits={n_qubits}")
        if n_qubits < 1:
            raise ConfigurationError("n_qubits must be >= 1")
        merged: dict[str, float] = {}
        for p in items:
            merged[p.word] = merged.get(p.word, 0.0) + p.coeff
        self._terms = {w: c for w, c in sorted(merged.items()) if abs(c) >= MERGE_THRESHOLD}
        self._n_qubits = n_qubits

    @property
    def n_qubits(self) -> int:
        return self._n_qubits

    @property
    def terms(self) -> list[PauliString]:
        return [PauliString(c, w) for w, c in self._terms.items()]

    def as_dict(self) -> dict[str, float]:
        return dict(self._terms)

    def coeff(self, word: str) -> float:
        return self._terms.get(word, 0.0)

    @property
    def is_diagonal(self) -> bool:
        return all(p.is_diagonal for p in self.terms)

    def diagonal(self) -> np.ndarray:
        """Basis-state eigenvalues of a diagonal (I/Z-only) Hamiltonian."""
        if not self.is_diagonal:
            raise ValidationError("Hamiltonian has off-diagonal terms")
        idx = np.arange(2**self._n_qubits)
        out = np.zeros(idx.shape)
        for w, c in self._terms.items():
            sign = np.ones(idx.shape)
            for q, letter in enumerate(w):
                if letter == "Z":
                    sign *= 1 - 2 * ((idx >> q) & 1)
            out += c * sign
        return out

    def padded(self, n_qubits: int) -> PauliHamiltonian:
        """Same operator acting on a larger register (identity on the new top qubits)."""
        if n_qubits < self._n_qubits:
            raise ConfigurationError("cannot shrink a Hamiltonian")
        pad = "I" * (n_qubits - self._n_qubits)
        return PauliHamiltonian({w + pad: c for w, c in self._terms.items()}, n_qubits)

    def _check_same_size(self, other: PauliHamiltonian):
        if other.n_qubits != self._n_qubits:
            raise ConfigurationError(f"qubit count mismatch: {self._n_qubits} vs {other.n_qubits}")

    def __add__(self, other: PauliHamiltonian) -> PauliHamiltonian:
        if not isinstance(other, PauliHamiltonian):
            return NotImplemented
        self._check_same_size(other)
        return PauliHamiltonian(self.terms + other.terms, self._n_qubits)

    def __sub__(self, other: PauliHamiltonian) -> PauliHamiltonian:
        if not isinstance(other, PauliHamiltonian):
            return NotImplemented
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> PauliHamiltonian:
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return PauliHamiltonian({w: scalar * c for w, c in self._terms.items()}, self._n_qubits)

    __rmul__ = __mul__

    def __neg__(self) -> PauliHamiltonian:
        return -1.0 * self

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliHamiltonian):
            return NotImplemented
        return self._n_qubits == other._n_qubits and self._terms == other._terms

    def __hash__(self):
        return hash((self._n_qubits, tuple(self._terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"{c:g}*{w}" for w, c in self._terms.items()) or "0"
        return f"PauliHamiltonian({body}; n_qubits={self._n_qubits})"


def single(letter: str, qubit: int, n_qubits: int, coeff: float = 1.0) -> PauliHamiltonian:
    """``coeff * letter`` acting on one qubit of an ``n_qubits`` register."""
    word = ["I"] * n_qubits
    word[qubit] = letter
    return PauliHamiltonian({"".join(word): coeff}, n_qubits)


@dataclass(frozen=True)
class DenseHermitian:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"expected a square matrix, got shape {m.shape}")
        dim = m.shape[0]
        if dim < 1 or dim & (dim - 1):
            raise ValidationError(f"dimension {dim} is not a power of two")
        if not np.allclose(m, m.conj().T, rtol=0, atol=1e-12):
            raise ValidationError("matrix is not Hermitian to 1e-12")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.values[0])

    @property
    def ground_state(self) -> np.ndarray:
        return self.vectors[:, 0]


def to_dense(h: PauliHamiltonian) -> DenseHermitian:
    if h.n_qubits > MAX_QUBITS:
        raise ConfigurationError(f"{h.n_qubits} qubits exceeds the dense limit of {MAX_QUBITS}")
    dim = 2**h.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    for p in h.terms:
        m += p.matrix()
    return DenseHermitian(m)


def _offdiag_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def eig_hermitian(m: DenseHermitian | np.ndarray) -> EigenSystem:
    """Cyclic complex Jacobi diagonalisation.

    Each rotation first removes the phase of ``a[p, q]`` and then applies the
    real symmetric Jacobi rotation, so the accumulated transform stays unitary.
    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``JACOBI_TOL * max(1, ||A||_F)``.
    """
    if not isinstance(m, DenseHermitian):
        m = DenseHermitian(np.asarray(m))
    a = np.array(m.entries, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    tol = JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))

    for _ in range(JACOBI_MAX_SWEEPS + 1):
        if _offdiag_norm(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g
                a[cols, :] = g.conj().T @ a[cols, :]
                v[:, cols] = v[:, cols] @ g
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        raise NumericalError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    return EigenSystem(values[order], v[:, order])


def expm_exact(h: PauliHamiltonian, t: float) -> np.ndarray:
    """exp(-i t H) as a dense unitary, via the eigendecomposition of H."""
    if h.n_qubits > MAX_QUBITS:
        raise ConfigurationError(f"{h.n_qubits} qubits exceeds the dense limit of {MAX_QUBITS}")
    if h.is_diagonal:
        return np.diag(np.exp(-1j * t * h.diagonal()))
    es = eig_hermitian(to_dense(h))
    return (es.vectors * np.exp(-1j * t * es.values)) @ es.vectors.conj().T


def expm_commuting(h: PauliHamiltonian, t: float) -> np.ndarray:
    """exp(-i t H) for mutually commuting terms, as a product of exp(-i t c P) = cos(tc) - i sin(tc) P."""
    terms = h.terms
    for i, p in enumerate(terms):
        if not all(p.commutes_with(q) for q in terms[i + 1 :]):
            raise ValidationError(f"term {p.word} does not commute with the rest")
    dim = 2**h.n_qubits
    u = np.eye(dim, dtype=complex)
    for p in terms:
        unit = PauliString(1.0, p.word).matrix()
        u = u @ (math.cos(t * p.coeff) * np.eye(dim) - 1j * math.sin(t * p.coeff) * unit)
    return u


def commutator_norm(a: PauliHamiltonian, b: PauliHamiltonian) -> float:
    ma, mb = to_dense(a).entries, to_dense(b).entries
    return float(np.linalg.norm(ma @ mb - mb @ ma))
