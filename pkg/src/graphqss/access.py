"""Which parities of the second labels a set of vertices can see or read out.

For an encoded graph state ``|G_l>`` a parity ``c . l2`` is

* *dependent* for a subset ``S`` when the reduced state on ``S`` changes under
  some flip of ``l2`` that changes the parity, and
* *accessible* when a stabilizer product ``prod K_i**c_i`` is supported inside
  ``S``, so measuring it reveals ``(-1)**(c . l2)``.

Both are GF(2) subspaces, computed here by two independent routes. A secret
``b`` is encoded by a vector ``v`` as ``l2 = b * v``; ``S`` learns ``b``
exactly when some basis parity ``c`` has ``c . v = 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .errors import DomainError
from .graph_core import Graph, LabeledGraphState, apply_stabilizer
from .pauli import group_member_with_support, stabilizer_product, stabilizer_product_masks


def _subset_mask(g: Graph, subset: Iterable[int]) -> int:
    m = 0
    for v in subset:
        g.check_vertex(v)
        m |= 1 << v
    return m


def accessible_parities(g: Graph, subset: Iterable[int]) -> list[int]:
    """Basis of parities readable by measuring a stabilizer product inside ``subset``."""
    return group_member_with_support(g, subset)


def flip_patterns(g: Graph, subset: Iterable[int]) -> list[int]:
    """Label flips produced by unitaries acting only outside ``subset``.

    ``Z_k`` flips ``l_k2``. ``X_j`` equals ``K_j`` times a ``Z`` pattern, and
    rewriting that ``K_j`` into the labels (the P1 move) yields the ``l2`` flip
    recorded here.
    """
    inside = _subset_mask(g, subset)
    zero = LabeledGraphState.encoded(g)
    out = []
    for j in range(g.n):
        if (inside >> j) & 1:
            continue
        out.append(1 << j)
        out.append(apply_stabilizer(zero, j).labels.second_mask)
    return gf2.basis(out)


def dependent_parities(g: Graph, subset: Iterable[int]) -> list[int]:
    """Basis of parities the reduced state on ``subset`` depends on."""
    return gf2.orthogonal_complement(flip_patterns(g, subset), g.n)


def secret_visible(basis: Sequence[int], encoding: int) -> bool:
    return any(gf2.dot(c, encoding) for c in basis)


def accessible_parities_oracle(g: Graph, subset: Iterable[int], max_n: int = 12) -> list[int]:
    """Brute force over all ``2**n`` stabilizer products (small graphs only)."""
    if g.n > max_n:
        raise DomainError(f"oracle enumeration limited to {max_n} vertices")
    inside = _subset_mask(g, subset)
    hits = []
    for c in range(1 << g.n):
        p = stabilizer_product(g, c)
        if not (p.x_mask | p.z_mask) & ~inside:
            hits.append(c)
    return gf2.basis(hits)


def dependent_parities_oracle(g: Graph, subset: Iterable[int], max_n: int = 8) -> list[int]:
    """Brute force: flips ``f`` leaving the dense reduced state unchanged, then their complement."""
    from .dense import apply_labels, build_graph_state, reduced_density
    from .graph_core import LabelVector

    if g.n > max_n:
        raise DomainError(f"oracle enumeration limited to {max_n} vertices")
    keep = sorted(set(subset))
    base = build_graph_state(g)
    rho0 = reduced_density(base, keep)
    invariant = []
    for f in range(1 << g.n):
        psi = apply_labels(base, LabelVector.encoded(gf2.unpack(f, g.n)))
        if np.allclose(reduced_density(psi, keep), rho0, atol=1e-10):
            invariant.append(f)
    return gf2.orthogonal_complement(invariant, g.n)


@dataclass(frozen=True)
class ParityReadout:
    """How one parity is recovered from single-qubit outcomes."""

    parity: int
    vertices: tuple[int, ...]
    sign_flip: int  # 1 when the stabilizer product carries a -1 in letter form

    def recombine(self, outcomes: dict[int, int]) -> int:
        bit = self.sign_flip
        for v in self.vertices:
            bit ^= outcomes[v]
        return bit


@dataclass(frozen=True)
class LoccPlan:
    """Single-qubit measurement bases and the rule for combining outcomes."""

    subset: tuple[int, ...]
    bases: dict[int, str]  # vertex -> X, Y or Z; vertices not listed stay idle
    readouts: tuple[ParityReadout, ...]

    def recombine(self, outcomes: dict[int, int]) -> list[int]:
        return [r.recombine(outcomes) for r in self.readouts]


@dataclass(frozen=True)
class LoccRefusal:
    """The requested parities need incompatible bases on some vertices."""

    subset: tuple[int, ...]
    conflicts: dict[int, tuple[str, ...]]
    reason: str = "requires joint operations"


_LETTER = {(1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


def readout_for(g: Graph, c: int) -> tuple[dict[int, str], ParityReadout]:
    x, z, phase = stabilizer_product_masks(g, c)
    letters = {v: _LETTER[((x >> v) & 1, (z >> v) & 1)] for v in gf2.support(x | z)}
    if phase % 2:
        raise AssertionError("stabilizer product is not Hermitian")
    return letters, ParityReadout(c, tuple(sorted(letters)), phase // 2)


def locc_plan(g: Graph, subset: Iterable[int], parities: Sequence[int]) -> LoccPlan | LoccRefusal:
    """Find one local basis per vertex that reads every requested parity at once.

    Each parity ``c`` fixes the letter of ``prod K_i**c_i`` on its support;
    distinct parities must agree wherever their supports overlap. The letter
    choice is forced, so the search is exact.
    """
    sub = tuple(sorted(set(subset)))
    inside = _subset_mask(g, sub)
    acc = accessible_parities(g, sub)
    piv = gf2._echelon(acc)
    bases: dict[int, str] = {}
    seen: dict[int, set[str]] = {}
    readouts = []
    for c in parities:
        if gf2.reduce(c, piv):
            raise DomainError(f"parity {gf2.support(c)} is not accessible to {list(sub)}")
        letters, ro = readout_for(g, c)
        assert all((inside >> v) & 1 for v in letters)
        readouts.append(ro)
        for v, ch in letters.items():
            seen.setdefault(v, set()).add(ch)
            bases.setdefault(v, ch)
    conflicts = {v: tuple(sorted(chs)) for v, chs in seen.items() if len(chs) > 1}
    if conflicts:
        return LoccRefusal(sub, conflicts)
    return LoccPlan(sub, dict(sorted(bases.items())), tuple(readouts))


def secret_parity(g: Graph, subset: Iterable[int], encoding: int) -> int | None:
    """An accessible parity ``c`` with ``c . encoding = 1``, or ``None``.

    Prefers a single vertex bit, then the smallest stabilizer support.
    """
    acc = accessible_parities(g, subset)
    if not secret_visible(acc, encoding):
        return None
    piv = gf2._echelon(acc)
    for v in gf2.support(encoding):
        if gf2.reduce(1 << v, piv) == 0:
            return 1 << v
    if len(acc) <= 16:
        cands = [c for c in gf2.span(acc) if gf2.dot(c, encoding)]
    else:
        cands = [c for c in acc if gf2.dot(c, encoding)]

    def cost(c: int) -> tuple[int, int, int]:
        x, z, _ = stabilizer_product_masks(g, c)
        return (c.bit_count() != 1, (x | z).bit_count(), c)

    return min(cands, key=cost)


@dataclass
class AccessReport:
    subset: tuple[int, ...]
    accessible_basis: list[int]
    dependent_basis: list[int]
    locc_plans: list[LoccPlan | LoccRefusal] = field(default_factory=list)
    joint_plan: LoccPlan | LoccRefusal | None = None
    secret: dict | None = None

    def to_json(self, n: int) -> dict:
        def vec(c: int) -> list[int]:
            return gf2.unpack(c, n)

        def plan(p: LoccPlan | LoccRefusal | None) -> dict | None:
            if p is None:
                return None
            if isinstance(p, LoccRefusal):
                return {"status": "refused", "reason": p.reason,
                        "conflicts": {str(v): list(ch) for v, ch in p.conflicts.items()}}
            return {
                "status": "ok",
                "bases": {str(v): b for v, b in p.bases.items()},
                "readouts": [
                    {"parity": vec(r.parity), "xor_of_outcomes": list(r.vertices), "plus": r.sign_flip}
                    for r in p.readouts
                ],
            }

        return {
            "subset": list(self.subset),
            "accessible_basis": [vec(c) for c in self.accessible_basis],
            "dependent_basis": [vec(c) for c in self.dependent_basis],
            "locc_plans": [plan(p) for p in self.locc_plans],
            "joint_plan": plan(self.joint_plan),
            "secret": self.secret,
        }


def analyze(g: Graph, subset: Iterable[int], encoding: int | None = None) -> AccessReport:
    sub = tuple(sorted(set(subset)))
    acc = accessible_parities(g, sub)
    dep = dependent_parities(g, sub)
    report = AccessReport(
        sub,
        acc,
        dep,
        [locc_plan(g, sub, [c]) for c in acc],
        locc_plan(g, sub, acc) if acc else None,
    )
    if encoding is not None:
        c = secret_parity(g, sub, encoding)
        report.secret = {
            "encoding": gf2.unpack(encoding, g.n),
            "visible": secret_visible(dep, encoding),
            "authorized": c is not None,
            "parity": gf2.unpack(c, g.n) if c is not None else None,
        }
    return report


@dataclass
class ThresholdReport:
    k: int
    players: tuple[int, ...]
    passed: bool
    leaking: list[tuple[int, ...]]  # fewer than k players, secret visible
    blocked: list[tuple[int, ...]]  # k or more players, secret not readable
    checked: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "players": list(self.players),
            "passed": self.passed,
            "leaking_subsets": [list(s) for s in self.leaking],
            "blocked_subsets": [list(s) for s in self.blocked],
            "subsets_checked": self.checked,
        }


def verify_threshold(
    g: Graph,
    encoding: int,
    k: int,
    players: Sequence[int] | None = None,
    exhaustive: bool = False,
    max_counterexamples: int = 20,
) -> ThresholdReport:
    """Check that exactly the ``k``-subsets of ``players`` and larger recover the secret.

    Access only grows with the subset, so by default only sizes ``k-1`` and
    ``k`` are enumerated; ``exhaustive`` checks every size.
    """
    players = tuple(range(g.n)) if players is None else tuple(sorted(set(players)))
    if not 1 <= k <= len(players):
        raise DomainError(f"threshold {k} outside 1..{len(players)}")
    sizes = range(len(players) + 1) if exhaustive else [k - 1, k]
    leaking: list[tuple[int, ...]] = []
    blocked: list[tuple[int, ...]] = []
    checked = 0
    for size in sizes:
        for sub in itertools.combinations(players, size):
            checked += 1
            if size < k:
                if secret_visible(dependent_parities(g, sub), encoding) and len(leaking) < max_counterexamples:
                    leaking.append(sub)
            else:
                c = secret_parity(g, sub, encoding)
                ok = c is not None and isinstance(locc_plan(g, sub, [c]), LoccPlan)
                if not ok and len(blocked) < max_counterexamples:
                    blocked.append(sub)
    return ThresholdReport(k, players, not leaking and not blocked, leaking, blocked, checked)
