"""Brute-force statevector reference implementation.

Amplitude index ``b`` has vertex 0 as its most significant bit, so a state is
reshaped to a ``(2,) * n`` tensor whose axis ``v`` is vertex ``v``.

The phase gate is ``S = diag(1, i)``, which is the convention under which
``Y_i Z_{N_i}`` stabilizes a square vertex with eigenvalue +1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ResourceError
from .graph_core import Graph, LabeledGraphState, LabelVector
from .pauli import PauliOperator

DEFAULT_QUBIT_CAP = 12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)

_LETTER_MATRIX = {"I": I2, "X": X, "Y": Y, "Z": Z}

# eigenvectors for outcome bit 0 (+1) and 1 (-1)
BASIS_VECTORS = {
    "Z": (np.array([1, 0], complex), np.array([0, 1], complex)),
    "X": (np.array([1, 1], complex) / np.sqrt(2), np.array([1, -1], complex) / np.sqrt(2)),
    "Y": (np.array([1, 1j], complex) / np.sqrt(2), np.array([1, -1j], complex) / np.sqrt(2)),
}

# Bell states on (a, b), index 2*i + j
BELL_STATES = (
    np.array([1, 0, 0, 1], complex) / np.sqrt(2),
    np.array([1, 0, 0, -1], complex) / np.sqrt(2),
    np.array([0, 1, 1, 0], complex) / np.sqrt(2),
    np.array([0, 1, -1, 0], complex) / np.sqrt(2),
)


@dataclass(frozen=True, eq=False)
class DenseState:
    """An ``n``-qubit pure state as a length ``2**n`` complex vector."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1).copy()
        n = int(round(np.log2(len(a)))) if len(a) else -1
        if n < 0 or 1 << n != len(a):
            raise DomainError(f"amplitude count {len(a)} is not a power of two")
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    @property
    def n(self) -> int:
        return len(self.amplitudes).bit_length() - 1

    @classmethod
    def zeros(cls, n: int) -> "DenseState":
        _check_cap(n)
        a = np.zeros(1 << n, complex)
        a[0] = 1
        return cls(a)

    @classmethod
    def from_qubits(cls, *qubits: Sequence[complex]) -> "DenseState":
        out = np.ones(1, complex)
        for q in qubits:
            out = np.kron(out, np.asarray(q, complex))
        return cls(out)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "DenseState") -> complex:
        _check_same_n(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def kron(self, other: "DenseState") -> "DenseState":
        return DenseState(np.kron(self.amplitudes, other.amplitudes))

    def scaled(self, factor: complex) -> "DenseState":
        return DenseState(self.amplitudes * factor)

    def to_json(self) -> list[list[float]]:
        return [[float(a.real), float(a.imag)] for a in self.amplitudes]


def _check_cap(n: int, cap: int = DEFAULT_QUBIT_CAP) -> None:
    if n > cap:
        raise ResourceError(f"{n} qubits exceeds the dense cap of {cap}")


def _check_same_n(a: DenseState, b: DenseState) -> None:
    if a.n != b.n:
        raise DomainError(f"qubit count mismatch: {a.n} vs {b.n}")


def _bit_columns(n: int) -> np.ndarray:
    # column v holds the value of vertex v for every basis index
    idx = np.arange(1 << n)
    shifts = np.arange(n - 1, -1, -1)
    return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.int64)


def build_graph_state(g: Graph, cap: int = DEFAULT_QUBIT_CAP) -> DenseState:
    """``prod S_square prod CZ_edge |+>^n``."""
    _check_cap(g.n, cap)
    n = g.n
    if n == 0:
        return DenseState(np.ones(1, complex))
    bits = _bit_columns(n)
    parity = np.zeros(1 << n, np.int64)
    for i, j in g.edges:
        parity ^= bits[:, i] & bits[:, j]
    amp = np.where(parity == 1, -1.0, 1.0).astype(complex)
    for v in g.squares:
        amp = amp * np.where(bits[:, v] == 1, 1j, 1.0)
    return DenseState(amp / np.sqrt(1 << n))


def apply_single(psi: DenseState, v: int, u: np.ndarray) -> DenseState:
    """Apply a 2x2 matrix to qubit ``v``."""
    if not 0 <= v < psi.n:
        raise DomainError(f"qubit {v} outside 0..{psi.n - 1}")
    t = np.tensordot(u, psi.tensor(), axes=([1], [v]))
    return DenseState(np.moveaxis(t, 0, v))


def apply_two(psi: DenseState, a: int, b: int, u: np.ndarray) -> DenseState:
    """Apply a 4x4 matrix to qubits ``(a, b)`` with ``a`` the high bit."""
    if a == b:
        raise DomainError("two-qubit gate needs distinct qubits")
    t = np.tensordot(u.reshape(2, 2, 2, 2), psi.tensor(), axes=([2, 3], [a, b]))
    return DenseState(np.moveaxis(t, [0, 1], [a, b]))


def apply_labels(psi: DenseState, labels: LabelVector) -> DenseState:
    """Apply ``X**l1 Z**l2`` on every vertex (``Z`` acts first)."""
    if len(labels) != psi.n:
        raise DomainError(f"label length {len(labels)} does not match {psi.n} qubits")
    out = psi
    for v, (l1, l2) in enumerate(labels):
        if l2:
            out = apply_single(out, v, Z)
        if l1:
            out = apply_single(out, v, X)
    return out


def labeled_state(s: LabeledGraphState, cap: int = DEFAULT_QUBIT_CAP) -> DenseState:
    """The exact vector of a labeled graph state, global phase included."""
    psi = apply_labels(build_graph_state(s.graph, cap), s.labels)
    return psi.scaled(s.phase_factor)


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    _check_cap(p.n)
    out = np.ones((1, 1), complex)
    for ch in p.letters():
        out = np.kron(out, _LETTER_MATRIX[ch])
    return out * (1j ** p.phase)


def apply_pauli(psi: DenseState, p: PauliOperator) -> DenseState:
    if p.n != psi.n:
        raise DomainError(f"Pauli on {p.n} qubits applied to {psi.n}-qubit state")
    out = psi
    for v, ch in enumerate(p.letters()):
        if ch != "I":
            out = apply_single(out, v, _LETTER_MATRIX[ch])
    return out.scaled(1j ** p.phase)


def expectation(psi: DenseState, p: PauliOperator) -> complex:
    return psi.inner(apply_pauli(psi, p))


def _pick(probs: np.ndarray, rng: np.random.Generator | None, outcome: int | None) -> int:
    if outcome is not None:
        if probs[outcome] < 1e-12:
            raise DomainError(f"outcome {outcome} has zero probability")
        return outcome
    if rng is None:
        raise DomainError("either rng or outcome must be given")
    return int(rng.choice(len(probs), p=probs / probs.sum()))


def measure_pauli(
    psi: DenseState,
    p: PauliOperator,
    rng: np.random.Generator | None = None,
    outcome: int | None = None,
) -> tuple[int, DenseState]:
    """Projective measurement of a Hermitian Pauli; the qubit count is unchanged.

    Outcome 0 is eigenvalue +1. Pass ``outcome`` to force a branch.
    """
    if not p.is_hermitian():
        raise DomainError(f"{p} is not Hermitian")
    ppsi = apply_pauli(psi, p).amplitudes
    branches = [(psi.amplitudes + ppsi) / 2, (psi.amplitudes - ppsi) / 2]
    probs = np.array([np.vdot(b, b).real for b in branches])
    s = _pick(probs, rng, outcome)
    return s, DenseState(branches[s] / np.sqrt(probs[s]))


def measure_qubit(
    psi: DenseState,
    v: int,
    basis: str,
    rng: np.random.Generator | None = None,
    outcome: int | None = None,
) -> tuple[int, DenseState]:
    """Measure qubit ``v`` in the ``X``, ``Y`` or ``Z`` basis and remove it.

    The residual is ``<e_s|_v psi`` renormalized, with ``e_s`` from
    :data:`BASIS_VECTORS`.
    """
    if basis not in BASIS_VECTORS:
        raise DomainError(f"unknown basis {basis!r}")
    if not 0 <= v < psi.n:
        raise DomainError(f"qubit {v} outside 0..{psi.n - 1}")
    t = np.moveaxis(psi.tensor(), v, 0).reshape(2, -1)
    branches = [np.conj(e) @ t for e in BASIS_VECTORS[basis]]
    probs = np.array([np.vdot(b, b).real for b in branches])
    s = _pick(probs, rng, outcome)
    return s, DenseState(branches[s] / np.sqrt(probs[s]))


def bell_measure(
    psi: DenseState,
    a: int,
    b: int,
    rng: np.random.Generator | None = None,
    outcome: int | None = None,
) -> tuple[tuple[int, int], DenseState]:
    """Project ``(a, b)`` onto the Bell basis and remove both qubits.

    Returns ``((i, j), residual)`` where ``|B_00> = |00>+|11>``, ``|B_01> =
    |00>-|11>``, ``|B_10> = |01>+|10>``, ``|B_11> = |01>-|10>`` (normalized,
    ``a`` written first).
    """
    if a == b:
        raise DomainError("Bell measurement needs two distinct qubits")
    for v in (a, b):
        if not 0 <= v < psi.n:
            raise DomainError(f"qubit {v} outside 0..{psi.n - 1}")
    t = np.moveaxis(psi.tensor(), [a, b], [0, 1]).reshape(4, -1)
    branches = [np.conj(bs) @ t for bs in BELL_STATES]
    probs = np.array([np.vdot(x, x).real for x in branches])
    k = _pick(probs, rng, outcome)
    return (k >> 1, k & 1), DenseState(branches[k] / np.sqrt(probs[k]))


def reduced_density(psi: DenseState, subset: Iterable[int]) -> np.ndarray:
    """Partial trace onto ``subset`` (kept in ascending vertex order)."""
    keep = sorted(set(subset))
    for v in keep:
        if not 0 <= v < psi.n:
            raise DomainError(f"qubit {v} outside 0..{psi.n - 1}")
    rest = [v for v in range(psi.n) if v not in keep]
    t = np.transpose(psi.tensor(), keep + rest).reshape(1 << len(keep), -1)
    return t @ t.conj().T


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(rho - sigma)
    return float(0.5 * np.abs(ev).sum())


def fidelity(psi: DenseState, phi: DenseState) -> float:
    return float(abs(psi.inner(phi)) ** 2)


def qubit_fidelity(rho_or_psi: np.ndarray, target: Sequence[complex]) -> float:
    """``<t|rho|t>`` for a single-qubit density matrix or state vector."""
    t = np.asarray(target, complex)
    t = t / np.linalg.norm(t)
    m = np.asarray(rho_or_psi, complex)
    if m.shape[0] != len(t):
        raise DomainError(f"state has dimension {m.shape[0]}, target has {len(t)}")
    if m.ndim == 1:
        return float(abs(np.vdot(t, m)) ** 2)
    return float(np.vdot(t, m @ t).real)


def phase_aligned_distance(psi: DenseState, phi: DenseState) -> float:
    """``min_theta ||psi - e^{i theta} phi||``; zero iff equal up to global phase."""
    ov = psi.inner(phi)
    rot = ov / abs(ov) if abs(ov) > 1e-15 else 1.0
    return float(np.linalg.norm(psi.amplitudes * rot - phi.amplitudes))


def exact_distance(psi: DenseState, phi: DenseState) -> float:
    _check_same_n(psi, phi)
    return float(np.linalg.norm(psi.amplitudes - phi.amplitudes))


def all_bitstrings(n: int) -> Iterable[tuple[int, ...]]:
    return itertools.product((0, 1), repeat=n)
