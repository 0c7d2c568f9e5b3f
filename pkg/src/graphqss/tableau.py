"""Stabilizer tableau simulator with bit-packed rows.

Rows ``0..n-1`` are destabilizers and rows ``n..2n-1`` stabilizers. Each row
stores ``x`` and ``z`` packed little-endian into ``uint64`` words (qubit ``q``
is bit ``q % 64`` of word ``q // 64``) and a phase exponent ``r`` so that the
row is ``i**r X**x Z**z`` with every ``X`` written before every ``Z``. That form
makes the product phase a single popcount: ``(X^a Z^b)(X^c Z^d) = (-1)^{b.c}
X^{a+c} Z^{b+d}``.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from . import gf2
from .errors import DomainError, ResourceError
from .graph_core import Graph, LabelVector
from .pauli import PauliOperator

_WORD = 64


def _words(n: int) -> int:
    return max(1, (n + _WORD - 1) // _WORD)


def _pack_mask(m: int, w: int) -> np.ndarray:
    out = np.zeros(w, np.uint64)
    k = 0
    while m:
        out[k] = m & 0xFFFFFFFFFFFFFFFF
        m >>= _WORD
        k += 1
    return out


def _unpack_mask(words: np.ndarray) -> int:
    out = 0
    for k, v in enumerate(words.tolist()):
        out |= int(v) << (_WORD * k)
    return out


def _popcount_rows(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).sum(axis=-1, dtype=np.int64)


class StabilizerTableau:
    """Full stabilizer/destabilizer tableau of an ``n``-qubit stabilizer state.

    Mutating methods act in place; :meth:`copy` gives an independent tableau.
    """

    def __init__(self, n: int, x: np.ndarray, z: np.ndarray, r: np.ndarray):
        self.n = n
        self.x = x
        self.z = z
        self.r = r

    @classmethod
    def zero_state(cls, n: int) -> "StabilizerTableau":
        """``|0...0>``: destabilizers ``X_q``, stabilizers ``Z_q``."""
        w = _words(n)
        x = np.zeros((2 * n, w), np.uint64)
        z = np.zeros((2 * n, w), np.uint64)
        for q in range(n):
            bit = np.uint64(1 << (q % _WORD))
            x[q, q // _WORD] |= bit
            z[n + q, q // _WORD] |= bit
        return cls(n, x, z, np.zeros(2 * n, np.int64))

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.n, self.x.copy(), self.z.copy(), self.r.copy())

    def _row_pauli(self, row: int) -> PauliOperator:
        xm = _unpack_mask(self.x[row])
        zm = _unpack_mask(self.z[row])
        letter_phase = int(self.r[row]) - (xm & zm).bit_count()
        return PauliOperator.from_masks(xm, zm, self.n, letter_phase)

    def stabilizer(self, k: int) -> PauliOperator:
        return self._row_pauli(self.n + k)

    def destabilizer(self, k: int) -> PauliOperator:
        return self._row_pauli(k)

    def stabilizers(self) -> list[PauliOperator]:
        return [self.stabilizer(k) for k in range(self.n)]

    def destabilizers(self) -> list[PauliOperator]:
        return [self.destabilizer(k) for k in range(self.n)]

    def _pauli_words(self, p: PauliOperator) -> tuple[np.ndarray, np.ndarray, int]:
        if p.n != self.n:
            raise DomainError(f"Pauli on {p.n} qubits measured on {self.n}-qubit tableau")
        w = self.x.shape[1]
        xm, zm = p.x_mask, p.z_mask
        return _pack_mask(xm, w), _pack_mask(zm, w), (p.phase + (xm & zm).bit_count()) % 4

    def _anticommuting(self, px: np.ndarray, pz: np.ndarray) -> np.ndarray:
        return (_popcount_rows((self.x & pz) ^ (self.z & px)) & 1).astype(bool)

    def measure(self, p: PauliOperator, rng: np.random.Generator | None = None) -> tuple[int, bool]:
        """Measure a Hermitian Pauli in place; returns ``(outcome, was_random)``.

        Outcome 0 is eigenvalue +1.
        """
        if not p.is_hermitian():
            raise DomainError(f"{p} is not Hermitian")
        px, pz, rp = self._pauli_words(p)
        anti = self._anticommuting(px, pz)
        return self._measure(px, pz, rp, anti, rng)

    def measure_qubit(self, q: int, basis: str, rng: np.random.Generator | None = None) -> tuple[int, bool]:
        """Single-qubit ``X``/``Y``/``Z`` measurement using a column bit test."""
        if not 0 <= q < self.n:
            raise DomainError(f"qubit {q} outside 0..{self.n - 1}")
        w = self.x.shape[1]
        word, bit = divmod(q, _WORD)
        b = np.uint64(1 << bit)
        xcol = (self.x[:, word] & b) != 0
        zcol = (self.z[:, word] & b) != 0
        px = np.zeros(w, np.uint64)
        pz = np.zeros(w, np.uint64)
        if basis == "Z":
            anti = xcol
            pz[word] = b
            rp = 0
        elif basis == "X":
            anti = zcol
            px[word] = b
            rp = 0
        elif basis == "Y":
            anti = xcol ^ zcol
            px[word] = b
            pz[word] = b
            rp = 1  # Y = i X Z
        else:
            raise DomainError(f"unknown basis {basis!r}")
        return self._measure(px, pz, rp, anti, rng)

    def _measure(self, px, pz, rp, anti, rng) -> tuple[int, bool]:
        n = self.n
        stab_hits = np.flatnonzero(anti[n:])
        if stab_hits.size:
            if rng is None:
                raise DomainError("random outcome needs an rng")
            p = n + int(stab_hits[0])
            others = np.flatnonzero(anti)
            others = others[others != p]
            if others.size:
                xp, zp, r_p = self.x[p], self.z[p], self.r[p]
                self.r[others] = (
                    self.r[others] + r_p + 2 * _popcount_rows(self.z[others] & xp)
                ) % 4
                self.x[others] ^= xp
                self.z[others] ^= zp
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self.r[p - n] = self.r[p]
            outcome = int(rng.integers(2))
            self.x[p] = px
            self.z[p] = pz
            self.r[p] = (rp + 2 * outcome) % 4
            return outcome, True
        rows = n + np.flatnonzero(anti[:n])
        if rows.size == 0:
            # only possible for the identity
            return (rp // 2) % 2, False
        xs = self.x[rows]
        zs = self.z[rows]
        zprefix = np.bitwise_xor.accumulate(zs, axis=0)
        cross = int(_popcount_rows(zprefix[:-1] & xs[1:]).sum()) if rows.size > 1 else 0
        r = (int(self.r[rows].sum()) + 2 * cross) % 4
        return ((r - rp) % 4) // 2, False

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` unless the commutation structure is intact."""
        n = self.n
        xs = [_unpack_mask(self.x[k]) for k in range(2 * n)]
        zs = [_unpack_mask(self.z[k]) for k in range(2 * n)]
        for a in range(2 * n):
            for b in range(a + 1, 2 * n):
                sym = gf2.dot(xs[a], zs[b]) ^ gf2.dot(zs[a], xs[b])
                want = 1 if (b == a + n and a < n) else 0
                if sym != want:
                    raise AssertionError(f"rows {a} and {b} have symplectic product {sym}")
        if gf2.rank([x | (z << n) for x, z in zip(xs, zs)]) != 2 * n:
            raise AssertionError("tableau rows are dependent")
        for k in range(n, 2 * n):
            if (self.r[k] - (xs[k] & zs[k]).bit_count()) % 2:
                raise AssertionError(f"stabilizer row {k - n} is not Hermitian")


def tableau_from_graph(g: Graph, labels: LabelVector | None = None) -> StabilizerTableau:
    """Tableau of ``X**l1 Z**l2 prod S |G>``: stabilizers ``+-K_i``, destabilizers ``Z_i``."""
    n = g.n
    if labels is None:
        labels = LabelVector.zeros(n)
    if len(labels) != n:
        raise DomainError(f"label length {len(labels)} does not match {n} vertices")
    w = _words(n)
    x = np.zeros((2 * n, w), np.uint64)
    z = np.zeros((2 * n, w), np.uint64)
    r = np.zeros(2 * n, np.int64)
    l1 = labels.first_mask
    l2 = labels.second_mask
    for i in range(n):
        word, bit = divmod(i, _WORD)
        b = np.uint64(1 << bit)
        z[i, word] |= b
        x[n + i, word] |= b
        sq = 1 if g.is_square(i) else 0
        zi = g.neighbour_mask(i) | (sq << i)
        z[n + i] = _pack_mask(zi, w)
        flip = ((l2 >> i) & 1) ^ gf2.dot(l1, zi)
        r[n + i] = sq + 2 * flip
    return StabilizerTableau(n, x, z, r)


def tableau_measure(
    t: StabilizerTableau, p: PauliOperator, rng: np.random.Generator | None = None
) -> tuple[int, StabilizerTableau]:
    """Functional wrapper: measure ``p`` on a copy of ``t``."""
    t2 = t.copy()
    outcome, _ = t2.measure(p, rng)
    return outcome, t2


def measure_many(
    t: StabilizerTableau, bases: Iterable[tuple[int, str]], rng: np.random.Generator
) -> dict[int, int]:
    """Measure several qubits in place, in the given order."""
    return {q: t.measure_qubit(q, b, rng)[0] for q, b in bases}


def to_dense(t: StabilizerTableau, max_qubits: int = 12) -> np.ndarray:
    """State vector of the tableau (global phase fixed so the largest amplitude is real positive)."""
    n = t.n
    if n > max_qubits:
        raise ResourceError(f"{n} qubits exceeds the dense cap of {max_qubits}")
    from .dense import DenseState, apply_pauli

    seed = np.random.default_rng(0)
    v = seed.normal(size=1 << n) + 1j * seed.normal(size=1 << n)
    psi = DenseState(v)
    for k in range(n):
        s = t.stabilizer(k)
        psi = DenseState((psi.amplitudes + apply_pauli(psi, s).amplitudes) / 2)
    a = psi.amplitudes / np.linalg.norm(psi.amplitudes)
    k = int(np.argmax(np.abs(a)))
    return a * (abs(a[k]) / a[k])
