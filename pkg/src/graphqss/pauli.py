"""Symplectic Pauli operators and graph-state stabilizer generators.

A :class:`PauliOperator` stores ``x`` and ``z`` bit vectors and a phase
exponent so that the operator is ``i**phase`` times the tensor product of the
letters ``I, X, Z, Y`` selected by ``(x, z) = (0,0), (1,0), (0,1), (1,1)``.
With this convention a Pauli is Hermitian iff ``phase`` is even, and the text
form ``"+XIZY"`` reads directly off the fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .errors import DomainError
from .graph_core import Graph

_LETTERS = "IXZY"  # index = x + 2*z
_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True, eq=False)
class PauliOperator:
    x: np.ndarray
    z: np.ndarray
    phase: int = 0

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=bool).copy()
        z = np.asarray(self.z, dtype=bool).copy()
        if x.shape != z.shape or x.ndim != 1:
            raise DomainError("x and z bit vectors must be 1-D with equal length")
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(np.zeros(n, bool), np.zeros(n, bool))

    @classmethod
    def from_string(cls, text: str) -> "PauliOperator":
        """Parse ``"+XIZY"``, ``"-iZ"``, ``"XX"`` (sign optional, vertex 0 leftmost)."""
        s = text.strip()
        phase = 0
        if s.startswith(("+", "-")):
            phase = 0 if s[0] == "+" else 2
            s = s[1:]
        if s.startswith("i"):
            phase += 1
            s = s[1:]
        x = np.zeros(len(s), bool)
        z = np.zeros(len(s), bool)
        for k, ch in enumerate(s.upper()):
            if ch not in _LETTERS:
                raise DomainError(f"bad Pauli letter {ch!r} in {text!r}")
            code = _LETTERS.index(ch)
            x[k] = code & 1
            z[k] = code >> 1
        return cls(x, z, phase)

    @classmethod
    def from_letters(cls, letters: dict[int, str], n: int, phase: int = 0) -> "PauliOperator":
        chars = ["I"] * n
        for v, ch in letters.items():
            chars[v] = ch
        return cls.from_string("".join(chars)).with_phase(phase)

    @classmethod
    def from_masks(cls, x: int, z: int, n: int, phase: int = 0) -> "PauliOperator":
        return cls(np.array(gf2.unpack(x, n), bool), np.array(gf2.unpack(z, n), bool), phase)

    def with_phase(self, phase: int) -> "PauliOperator":
        return PauliOperator(self.x, self.z, phase)

    def letters(self) -> str:
        codes = self.x.astype(np.int8) + 2 * self.z.astype(np.int8)
        return "".join(_LETTERS[c] for c in codes)

    def letter(self, v: int) -> str:
        return _LETTERS[int(self.x[v]) + 2 * int(self.z[v])]

    def __str__(self) -> str:
        return _PREFIX[self.phase] + self.letters()

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (
            self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((str(self),))

    @property
    def x_mask(self) -> int:
        return gf2.mask(self.x)

    @property
    def z_mask(self) -> int:
        return gf2.mask(self.z)

    def support(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.x | self.z).tolist())

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators."""
        if not self.is_hermitian():
            raise DomainError(f"{self} is not Hermitian")
        return 1 if self.phase == 0 else -1

    def commutes(self, other: "PauliOperator") -> bool:
        _check_len(self, other)
        s = np.count_nonzero(self.x & other.z) + np.count_nonzero(self.z & other.x)
        return s % 2 == 0

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return pauli_mul(self, other)

    def __neg__(self) -> "PauliOperator":
        return self.with_phase(self.phase + 2)


def _check_len(p: PauliOperator, q: PauliOperator) -> None:
    if p.n != q.n:
        raise DomainError(f"Pauli length mismatch: {p.n} vs {q.n}")


def pauli_mul(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """The product ``p q`` with its exact phase."""
    _check_len(p, q)
    # letters -> X-before-Z form: Y = i X Z
    rp = p.phase + np.count_nonzero(p.x & p.z)
    rq = q.phase + np.count_nonzero(q.x & q.z)
    r = rp + rq + 2 * np.count_nonzero(p.z & q.x)
    x = p.x ^ q.x
    z = p.z ^ q.z
    return PauliOperator(x, z, int(r - np.count_nonzero(x & z)))


def product(ops: Iterable[PauliOperator], n: int | None = None) -> PauliOperator:
    ops = list(ops)
    if not ops:
        if n is None:
            raise DomainError("empty product needs n")
        return PauliOperator.identity(n)
    out = ops[0]
    for p in ops[1:]:
        out = pauli_mul(out, p)
    return out


def graph_stabilizers(g: Graph) -> list[PauliOperator]:
    """``K_i = X_i prod_{j in N_i} Z_j`` (``Y_i`` in place of ``X_i`` on square vertices)."""
    out = []
    for i in range(g.n):
        x = 1 << i
        z = g.neighbour_mask(i) | ((1 << i) if g.is_square(i) else 0)
        out.append(PauliOperator.from_masks(x, z, g.n))
    return out


def stabilizer_product(g: Graph, c: int) -> PauliOperator:
    """``prod_i K_i**c_i`` for a coefficient mask ``c`` (generators commute, so order is irrelevant)."""
    return product((k for i, k in enumerate(graph_stabilizers(g)) if (c >> i) & 1), g.n)


def stabilizer_product_masks(g: Graph, c: int) -> tuple[int, int, int]:
    """``(x, z, phase)`` of ``prod K_i**c_i`` without materialising every generator.

    Works on int masks so it stays cheap for thousands of vertices.
    """
    x = 0
    z = 0
    r = 0  # X-before-Z phase exponent
    for i in gf2.support(c):
        xi = 1 << i
        zi = g.neighbour_mask(i) | (xi if g.is_square(i) else 0)
        ri = 1 if g.is_square(i) else 0
        r += ri + 2 * gf2.dot(z, xi)
        x ^= xi
        z ^= zi
    return x, z, (r - (x & z).bit_count()) % 4


def generator_masks(g: Graph) -> tuple[list[int], list[int]]:
    xs = [1 << i for i in range(g.n)]
    zs = [g.neighbour_mask(i) | ((1 << i) if g.is_square(i) else 0) for i in range(g.n)]
    return xs, zs


def support_kernel(xs: Sequence[int], zs: Sequence[int], n: int, target_support: Iterable[int]) -> list[int]:
    """Coefficient vectors ``c`` with ``prod g_i**c_i`` trivial outside ``target_support``.

    ``xs[i]``/``zs[i]`` are the bit masks of generator ``i`` over ``n`` qubits.
    """
    inside = gf2.mask_of(target_support)
    m = len(xs)
    constraints = []
    for j in range(n):
        if (inside >> j) & 1:
            continue
        bit = 1 << j
        row_x = 0
        row_z = 0
        for i in range(m):
            if xs[i] & bit:
                row_x |= 1 << i
            if zs[i] & bit:
                row_z |= 1 << i
        if row_x:
            constraints.append(row_x)
        if row_z:
            constraints.append(row_z)
    return gf2.nullspace(constraints, m)


def group_member_with_support(g: Graph, target_support: Iterable[int]) -> list[int]:
    """Basis of stabilizer products ``prod K_i**c_i`` supported inside ``target_support``.

    For a graph the constraints are ``c_j = 0`` and ``sum_{i in N_j} c_i = 0`` for
    every vertex ``j`` outside the support. Returned as int masks.
    """
    inside = gf2.mask_of(target_support)
    for v in gf2.support(inside):
        g.check_vertex(v)
    constraints = []
    for j in range(g.n):
        if not (inside >> j) & 1:
            constraints.append(1 << j)
            nb = g.neighbour_mask(j)
            if nb:
                constraints.append(nb)
    return gf2.nullspace(constraints, g.n)
