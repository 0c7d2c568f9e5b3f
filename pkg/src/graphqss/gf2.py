"""Linear algebra over GF(2) with vectors packed into Python ints.

Bit ``i`` of an int is coordinate ``i``. Python ints are arbitrary precision,
so a vector over a few thousand coordinates is still one object and XOR is a
single operation.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def mask(bits: Iterable[int]) -> int:
    """Pack a 0/1 sequence (index 0 first) into an int."""
    out = 0
    for i, b in enumerate(bits):
        if b & 1:
            out |= 1 << i
    return out


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def unpack(v: int, n: int) -> list[int]:
    return [(v >> i) & 1 for i in range(n)]


def support(v: int) -> list[int]:
    out = []
    i = 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out


def dot(a: int, b: int) -> int:
    return (a & b).bit_count() & 1


def _echelon(rows: Iterable[int]) -> dict[int, int]:
    # pivot column (lowest set bit) -> row; rows are independent
    piv: dict[int, int] = {}
    for r in rows:
        while r:
            col = (r & -r).bit_length() - 1
            if col in piv:
                r ^= piv[col]
            else:
                piv[col] = r
                break
    return piv


def rref(rows: Iterable[int]) -> dict[int, int]:
    """Reduced row echelon form keyed by pivot column.

    Every returned row has a 1 in its pivot column and 0 in all other pivot
    columns.
    """
    piv = _echelon(rows)
    pivot_mask = mask_of(piv)
    # rows only carry bits above their pivot, so clearing from the highest pivot down is final
    for c in sorted(piv, reverse=True):
        r = piv[c]
        hits = r & pivot_mask & ~(1 << c)
        while hits:
            c2 = (hits & -hits).bit_length() - 1
            hits &= hits - 1
            if (r >> c2) & 1:
                r ^= piv[c2]
        piv[c] = r
    return piv


def basis(vectors: Iterable[int]) -> list[int]:
    """A canonical basis (the RREF rows, sorted by pivot) of the span."""
    piv = rref(vectors)
    return [piv[c] for c in sorted(piv)]


def rank(vectors: Iterable[int]) -> int:
    return len(_echelon(vectors))


def reduce(v: int, piv: dict[int, int]) -> int:
    """Reduce ``v`` against an echelon dict; zero iff ``v`` is in the span."""
    # each row's lowest bit is its pivot, so ascending order never reintroduces a cleared pivot
    for c in sorted(piv):
        if (v >> c) & 1:
            v ^= piv[c]
    return v


def in_span(v: int, vectors: Iterable[int]) -> bool:
    return reduce(v, _echelon(vectors)) == 0


def same_span(a: Sequence[int], b: Sequence[int]) -> bool:
    pa = _echelon(a)
    return rank(b) == len(pa) and all(reduce(v, pa) == 0 for v in b)


def nullspace(constraints: Iterable[int], n: int) -> list[int]:
    """Basis of ``{c in GF(2)^n : <row, c> = 0 for every constraint row}``."""
    piv = rref(constraints)
    full = (1 << n) - 1
    pivot_mask = mask_of(piv)
    out = []
    free = full & ~pivot_mask
    while free:
        f = (free & -free).bit_length() - 1
        free &= free - 1
        v = 1 << f
        for c, r in piv.items():
            if (r >> f) & 1:
                v |= 1 << c
        out.append(v)
    return basis(out)


def orthogonal_complement(vectors: Iterable[int], n: int) -> list[int]:
    return nullspace(vectors, n)


def span(vectors: Sequence[int]) -> list[int]:
    """Every element of the span (exponential; small inputs only)."""
    b = basis(vectors)
    out = [0]
    for v in b:
        out += [u ^ v for u in out]
    return out
