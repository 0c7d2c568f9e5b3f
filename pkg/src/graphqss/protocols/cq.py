"""Key distribution over quantum channels with an optional intercept-resend eavesdropper.

Each round the dealer prepares the dealer-augmented graph state, keeps the
dealer vertex and sends every player one qubit. The dealer measures ``Z`` or
``Y``; the players measure bases drawn from the scheme's menu. A round is kept
(sifted) when the measured letters, dealer included, multiply to a stabilizer
``+-prod K_i**c_i`` of the state: then the dealer's outcome equals the XOR of
the players' outcomes up to the known sign of that product.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .. import gf2
from ..errors import DomainError, UnsupportedError
from ..graph_core import Graph
from ..pauli import group_member_with_support, stabilizer_product_masks
from ..rng import CHECK_STREAM, round_rng, stream
from ..schemes import SchemeSpec
from ..tableau import StabilizerTableau, tableau_from_graph

_LETTER = {(1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


@dataclass(frozen=True)
class CQMenu:
    """Basis choices for the players.

    Either every player draws independently from ``independent[v]``, or the
    players jointly draw one of ``patterns``.
    """

    vertices: tuple[int, ...]
    independent: dict[int, tuple[str, ...]] | None = None
    patterns: tuple[dict[int, str], ...] | None = None

    def draw(self, rng: np.random.Generator) -> dict[int, str]:
        if self.patterns is not None:
            return dict(self.patterns[int(rng.integers(len(self.patterns)))])
        assert self.independent is not None
        return {v: self.independent[v][int(rng.integers(len(self.independent[v])))] for v in self.vertices}

    def vertex_menu(self, v: int) -> tuple[str, ...]:
        if self.patterns is not None:
            return tuple(sorted({p[v] for p in self.patterns}))
        assert self.independent is not None
        return self.independent[v]

    def to_json(self) -> dict:
        if self.patterns is not None:
            return {"joint_patterns": [{str(v): b for v, b in p.items()} for p in self.patterns]}
        assert self.independent is not None
        return {"per_player": {str(v): list(m) for v, m in self.independent.items()}}


def letters_of(g: Graph, c: int) -> tuple[dict[int, str], int]:
    """Letters of ``prod K_i**c_i`` and its sign bit in letter form."""
    x, z, phase = stabilizer_product_masks(g, c)
    return {v: _LETTER[((x >> v) & 1, (z >> v) & 1)] for v in gf2.support(x | z)}, phase // 2


def check_assignment(g: Graph, letters: dict[int, str]) -> tuple[bool, int, int]:
    """Is the product of these single-qubit letters (unmeasured = identity) a stabilizer?

    Returns ``(valid, c, sign_bit)``. The stabilizer candidate is forced: its
    ``x`` part is the set of ``X``/``Y`` letters, which fixes ``c``.
    """
    x = gf2.mask_of(v for v, b in letters.items() if b in "XY")
    z = gf2.mask_of(v for v, b in letters.items() if b in "ZY")
    cx, cz, phase = stabilizer_product_masks(g, x)
    if cx != x or cz != z:
        return False, x, 0
    return True, x, phase // 2


def nn_parity_rule(letters: dict[int, str], dealer: int) -> bool:
    """Star-scheme sifting rule: dealer ``Z`` with an even number of player ``Y``s, dealer ``Y`` with odd."""
    ys = sum(1 for v, b in letters.items() if v != dealer and b == "Y")
    return (letters[dealer] == "Z") == (ys % 2 == 0)


def cq_menu(spec: SchemeSpec, subset: Iterable[int] | None = None) -> CQMenu:
    """The players' basis menu for ``spec`` restricted to the participating ``subset``."""
    sub = tuple(sorted(set(spec.players if subset is None else subset)))
    if spec.dealer_anchors is None:
        raise UnsupportedError(f"scheme {spec.name} has no quantum-channel version")
    if spec.kind in ("nn", "tree"):
        if sub != spec.players:
            raise DomainError(f"{spec.name} needs every player, got {list(sub)}")
        center = spec.center
        leaves = ("Z", "Y") if spec.kind == "nn" else ("Z",)
        menu = {v: (("X", "Y") if v == center else leaves) for v in sub}
        return CQMenu(sub, independent=menu)
    if spec.kind == "ring5":
        if len(sub) < spec.k:
            raise DomainError(f"{spec.name} needs at least {spec.k} players, got {list(sub)}")
        return CQMenu(sub, patterns=_kernel_patterns(spec.dealer_graph(), sub, spec.dealer))
    raise UnsupportedError(f"no key-distribution menu for {spec.name}")


def _kernel_patterns(g: Graph, subset: tuple[int, ...], dealer: int) -> tuple[dict[int, str], ...]:
    # one stabilizer inside subset+dealer per dealer basis, smallest support first
    kernel = gf2.span(group_member_with_support(g, subset + (dealer,)))
    out = []
    for want in ("Z", "Y"):
        best = None
        for c in kernel:
            letters, _ = letters_of(g, c)
            if letters.get(dealer) != want:
                continue
            key = (len(letters), c)
            if best is None or key < best[0]:
                best = (key, letters)
        if best is None:
            raise UnsupportedError(f"subset {list(subset)} has no stabilizer pairing with dealer {want}")
        out.append({v: b for v, b in sorted(best[1].items()) if v != dealer})
    return tuple(out)


@dataclass(frozen=True)
class EveModel:
    """Intercept-resend eavesdropper on the dealer-to-player channels.

    Eve draws bases exactly as the players do (one draw from the same menu,
    independent of theirs), measures each attacked qubit in its basis and
    forwards the collapsed qubit.
    """

    strategy: str = "none"
    channels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strategy not in ("none", "intercept-resend"):
            raise DomainError(f"unknown Eve strategy {self.strategy!r}")

    @property
    def active(self) -> bool:
        return self.strategy == "intercept-resend" and bool(self.channels)


def eve_intercept_resend(
    t: StabilizerTableau, eve: EveModel, menu: CQMenu, rng: np.random.Generator
) -> dict[int, tuple[str, int]]:
    """Eve measures each attacked qubit in place; returns ``{vertex: (basis, outcome)}``."""
    record: dict[int, tuple[str, int]] = {}
    if not eve.active:
        return record
    bases = menu.draw(rng)
    # a tapped player left idle by Eve's draw has no basis, so that qubit passes untouched
    for v in eve.channels:
        if v in bases:
            record[v] = (bases[v], t.measure_qubit(v, bases[v], rng)[0])
    return record


@dataclass
class RoundRecord:
    dealer_basis: str
    player_bases: dict[int, str]
    dealer_bit: int
    player_outcomes: dict[int, int]
    sifted: bool
    players_bit: int | None  # XOR of outcomes with the sign of whichever dealer basis fits
    eve: dict[int, tuple[str, int]] = field(default_factory=dict)
    eve_bit: int | None = None

    def to_json(self) -> dict:
        out = {
            "dealer_basis": self.dealer_basis,
            "player_bases": "".join(self.player_bases[v] for v in sorted(self.player_bases)),
            "dealer_bit": self.dealer_bit,
            "player_outcomes": "".join(str(self.player_outcomes[v]) for v in sorted(self.player_outcomes)),
            "players_bit": self.players_bit,
            "sifted": self.sifted,
        }
        if self.eve:
            out["eve_bases"] = "".join(self.eve[v][0] for v in sorted(self.eve))
            out["eve_outcomes"] = "".join(str(self.eve[v][1]) for v in sorted(self.eve))
        return out


@dataclass
class CQTranscript:
    scheme: str
    subset: tuple[int, ...]
    seed: int
    menu: CQMenu
    eve: EveModel
    check_fraction: float
    rounds: list[RoundRecord]
    sifted: list[int]
    checked: list[int]
    errors: int
    verdict: str
    key: list[int]
    players_key: list[int]

    @property
    def sift_rate(self) -> float:
        return len(self.sifted) / len(self.rounds) if self.rounds else 0.0

    @property
    def qber(self) -> float:
        return self.errors / len(self.checked) if self.checked else 0.0

    def mismatched_correlation(self) -> tuple[float, int]:
        """Mean of ``(-1)**(dealer_bit ^ players_bit)`` over rounds with the wrong dealer basis."""
        vals = [
            1 - 2 * (r.dealer_bit ^ r.players_bit)
            for r in self.rounds
            if not r.sifted and r.players_bit is not None
        ]
        return (float(np.mean(vals)) if vals else 0.0), len(vals)

    def eve_information(self) -> dict | None:
        """How much of the sifted data Eve's own outcomes determine.

        Eve knows a sifted bit exactly when her bases, with the announced
        dealer basis, form a kept assignment. Reported over all sifted rounds
        because an aborted run has no key.
        """
        if not self.eve.active:
            return None
        known = [self.rounds[i] for i in self.sifted if self.rounds[i].eve_bit is not None]
        pairs = [(r.dealer_bit, r.eve_bit) for r in known]
        return {
            "known_fraction": len(known) / len(self.sifted) if self.sifted else 0.0,
            "agreement_when_known": float(np.mean([a == b for a, b in pairs])) if pairs else None,
            "mutual_information_when_known": _mutual_information(pairs) if pairs else None,
        }

    def to_json(self, include_rounds: bool = True) -> dict:
        corr, n_mis = self.mismatched_correlation()
        out = {
            "scheme": self.scheme,
            "subset": list(self.subset),
            "seed": self.seed,
            "menu": self.menu.to_json(),
            "eve": {"strategy": self.eve.strategy, "channels": list(self.eve.channels)},
            "rounds": len(self.rounds),
            "sifted": len(self.sifted),
            "sift_rate": self.sift_rate,
            "check_fraction": self.check_fraction,
            "checked": len(self.checked),
            "check_errors": self.errors,
            "qber": self.qber,
            "verdict": self.verdict,
            "key": "".join(map(str, self.key)),
            "players_key": "".join(map(str, self.players_key)),
            "mismatched_basis_correlation": {"mean": corr, "rounds": n_mis},
            "eve_mutual_information": self.eve_information(),
        }
        if include_rounds:
            out["round_records"] = [r.to_json() for r in self.rounds]
            out["check_indices"] = self.checked
        return out


def _mutual_information(pairs: Sequence[tuple[int, int]]) -> float:
    counts = np.zeros((2, 2))
    for a, b in pairs:
        counts[a, b] += 1
    p = counts / counts.sum()
    pa = p.sum(axis=1)
    pb = p.sum(axis=0)
    mi = 0.0
    for a in range(2):
        for b in range(2):
            if p[a, b] > 0:
                mi += p[a, b] * math.log2(p[a, b] / (pa[a] * pb[b]))
    return float(mi)


@dataclass(frozen=True)
class _RoundContext:
    graph: Graph
    template: StabilizerTableau
    dealer: int
    menu: CQMenu
    eve: EveModel
    seed: int


def _players_bit(ctx: _RoundContext, letters: dict[int, str], outcomes: dict[int, int]) -> tuple[bool, int | None]:
    valid, _, sign = check_assignment(ctx.graph, letters)
    if valid:
        return True, _xor(outcomes.values()) ^ sign
    other = dict(letters)
    other[ctx.dealer] = "Y" if letters[ctx.dealer] == "Z" else "Z"
    ok, _, sign = check_assignment(ctx.graph, other)
    return False, (_xor(outcomes.values()) ^ sign) if ok else None


def _xor(bits: Iterable[int]) -> int:
    out = 0
    for b in bits:
        out ^= b
    return out


def _eve_guess(ctx: _RoundContext, dealer_basis: str, eve: dict[int, tuple[str, int]]) -> int | None:
    # Eve learns the bit when she measured a whole draw and it forms a kept assignment
    letters = {v: b for v, (b, _) in eve.items()}
    if ctx.menu.patterns is not None:
        if letters not in ctx.menu.patterns:
            return None
    elif set(eve) != set(ctx.menu.vertices):
        return None
    letters[ctx.dealer] = dealer_basis
    valid, _, sign = check_assignment(ctx.graph, letters)
    return (_xor(o for _, o in eve.values()) ^ sign) if valid else None


def _simulate_round(ctx: _RoundContext, r: int) -> RoundRecord:
    rng = round_rng(ctx.seed, r)
    dealer_basis = "ZY"[int(rng.integers(2))]
    bases = ctx.menu.draw(rng)
    t = ctx.template.copy()
    eve = eve_intercept_resend(t, ctx.eve, ctx.menu, rng)
    dealer_bit = t.measure_qubit(ctx.dealer, dealer_basis, rng)[0]
    outcomes = {}
    for v, b in sorted(bases.items(), key=lambda vb: (vb[1] != "Z", vb[0])):
        outcomes[v] = t.measure_qubit(v, b, rng)[0]
    letters = dict(bases)
    letters[ctx.dealer] = dealer_basis
    sifted, pbit = _players_bit(ctx, letters, outcomes)
    rec = RoundRecord(dealer_basis, dict(sorted(bases.items())), dealer_bit, dict(sorted(outcomes.items())), sifted, pbit, eve)
    if eve:
        rec.eve_bit = _eve_guess(ctx, dealer_basis, eve)
    return rec


def _simulate_chunk(args: tuple[_RoundContext, int, int]) -> list[RoundRecord]:
    ctx, lo, hi = args
    return [_simulate_round(ctx, r) for r in range(lo, hi)]


def cq_run(
    spec: SchemeSpec,
    rounds: int,
    eve: EveModel | None = None,
    check_fraction: float = 0.2,
    seed: int = 0,
    subset: Iterable[int] | None = None,
    workers: int = 1,
) -> CQTranscript:
    """Run ``rounds`` rounds, sift, reveal a check sample and decide accept/abort.

    Round ``r`` draws from its own stream derived from ``(seed, r)``, so the
    transcript does not depend on ``workers``.
    """
    if rounds < 1:
        raise DomainError(f"rounds must be at least 1, got {rounds}")
    if not 0 < check_fraction < 1:
        raise DomainError(f"check fraction must lie in (0, 1), got {check_fraction}")
    eve = eve or EveModel()
    menu = cq_menu(spec, subset)
    for v in eve.channels:
        if v not in menu.vertices:
            raise DomainError(f"Eve can only attack participating players; {v} is not one")
    g = spec.dealer_graph()
    ctx = _RoundContext(g, tableau_from_graph(g), spec.dealer, menu, eve, seed)
    if workers > 1 and rounds > 1:
        size = math.ceil(rounds / workers)
        chunks = [(ctx, lo, min(rounds, lo + size)) for lo in range(0, rounds, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [rec for part in pool.map(_simulate_chunk, chunks) for rec in part]
    else:
        records = _simulate_chunk((ctx, 0, rounds))
    sifted = [i for i, rec in enumerate(records) if rec.sifted]
    n_check = min(len(sifted), max(1, round(check_fraction * len(sifted)))) if sifted else 0
    pick = stream(seed, CHECK_STREAM).choice(len(sifted), size=n_check, replace=False) if n_check else []
    checked = sorted(sifted[int(i)] for i in pick)
    errors = sum(records[i].dealer_bit != records[i].players_bit for i in checked)
    verdict = "accept" if checked and errors == 0 else "abort"
    key_idx = [i for i in sifted if i not in set(checked)] if verdict == "accept" else []
    return CQTranscript(
        spec.name,
        menu.vertices,
        seed,
        menu,
        eve,
        check_fraction,
        records,
        sifted,
        checked,
        errors,
        verdict,
        [records[i].dealer_bit for i in key_idx],
        [records[i].players_bit for i in key_idx],
    )


@dataclass
class SecurityWitness:
    certified: list[int]  # coefficient masks c with prod K_i**c_i certified +1
    rank: int
    total: int
    conclusion: str
    generators: list[str]

    def to_json(self) -> dict:
        return {
            "certified_products": self.generators,
            "rank": self.rank,
            "vertices": self.total,
            "conclusion": self.conclusion,
        }


def _name_product(c: int, dealer: int) -> str:
    return "*".join("KD" if v == dealer else f"K{v}" for v in gf2.support(c))


def cq_security_witness(spec: SchemeSpec, transcript: CQTranscript) -> SecurityWitness:
    """Stabilizer products whose +1 expectation the error-free check sample certifies.

    If they generate the whole stabilizer group the shared state is exactly
    the intended one; otherwise the check only pins the state to the subspace
    those products stabilize.
    """
    if transcript.verdict != "accept":
        raise DomainError("a security witness needs an accepted transcript")
    g = spec.dealer_graph()
    cs = set()
    for i in transcript.checked:
        rec = transcript.rounds[i]
        letters = dict(rec.player_bases)
        letters[spec.dealer] = rec.dealer_basis
        valid, c, _ = check_assignment(g, letters)
        assert valid
        cs.add(c)
    basis: list[int] = []
    for c in sorted(cs, key=lambda c: (c.bit_count(), c)):
        if not gf2.in_span(c, basis):
            basis.append(c)
    total = g.n
    conclusion = "full-state" if len(basis) == total else "secure-subspace"
    return SecurityWitness(basis, len(basis), total, conclusion, [_name_product(c, spec.dealer) for c in basis])
