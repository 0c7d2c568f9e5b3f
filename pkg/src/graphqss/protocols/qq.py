"""Sharing a quantum secret: teleport it into the dealer's graph state, then localize it.

These runs use the dense simulator because the secret is an arbitrary qubit.
With ``g0`` the players' graph state and ``g1 = Z_{N_D} g0`` (``N_D`` the
dealer's anchors), a secret ``alpha|0> + beta|1>`` is stored as
``alpha g0 + beta g1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..dense import (
    DEFAULT_QUBIT_CAP,
    H,
    X,
    Z,
    DenseState,
    apply_labels,
    apply_pauli,
    apply_single,
    bell_measure,
    build_graph_state,
    measure_qubit,
    qubit_fidelity,
    reduced_density,
    trace_distance,
)
from ..errors import DomainError, ResourceError, UnsupportedError
from ..graph_core import LabelVector
from ..pauli import PauliOperator, graph_stabilizers
from ..schemes import SchemeSpec


def _check_secret(alpha: complex, beta: complex) -> np.ndarray:
    s = np.array([alpha, beta], dtype=complex)
    if abs(np.vdot(s, s).real - 1) > 1e-9:
        raise DomainError(f"secret is not normalized: |alpha|^2 + |beta|^2 = {np.vdot(s, s).real}")
    return s


def logical_states(spec: SchemeSpec) -> tuple[DenseState, DenseState]:
    if spec.dealer_anchors is None:
        raise UnsupportedError(f"scheme {spec.name} has no quantum-secret version")
    g0 = build_graph_state(spec.graph)
    flip = [1 if v in spec.dealer_anchors else 0 for v in range(spec.graph.n)]
    return g0, apply_labels(g0, LabelVector.encoded(flip))


def encoded_secret(spec: SchemeSpec, alpha: complex, beta: complex) -> DenseState:
    """``alpha g0 + beta g1`` built directly."""
    s = _check_secret(alpha, beta)
    g0, g1 = logical_states(spec)
    return DenseState(s[0] * g0.amplitudes + s[1] * g1.amplitudes)


def correction(spec: SchemeSpec, i: int, j: int) -> PauliOperator:
    """Fix-up after Bell outcome ``(i, j)``: ``Z_{N_D}**i`` first, then ``K_a**j`` for an anchor ``a``."""
    n = spec.graph.n
    out = PauliOperator.identity(n)
    if i:
        out = PauliOperator.from_letters({v: "Z" for v in spec.dealer_anchors}, n) * out
    if j:
        out = graph_stabilizers(spec.graph)[min(spec.dealer_anchors)] * out
    return out


@dataclass
class QQEncoding:
    state: DenseState
    bell: tuple[int, int]


def qq_encode(
    spec: SchemeSpec,
    alpha: complex,
    beta: complex,
    rng: np.random.Generator | None = None,
    outcome: int | None = None,
) -> QQEncoding:
    """Teleport the secret into the dealer vertex and correct.

    The input qubit sits after the dealer; the Bell measurement acts on
    ``(input, dealer)``. ``outcome`` forces a Bell branch ``2*i + j``.
    """
    s = _check_secret(alpha, beta)
    g = spec.dealer_graph()
    if g.n + 1 > DEFAULT_QUBIT_CAP:
        raise ResourceError(f"{g.n + 1} qubits exceeds the dense cap of {DEFAULT_QUBIT_CAP}")
    full = build_graph_state(g).kron(DenseState(s))
    (i, j), players = bell_measure(full, g.n, spec.dealer, rng=rng, outcome=outcome)
    return QQEncoding(apply_pauli(players, correction(spec, i, j)), (i, j))


def qq_authorized(spec: SchemeSpec, subset: Iterable[int]) -> bool:
    sub = set(subset)
    if not sub <= set(spec.players):
        raise DomainError(f"{sorted(sub - set(spec.players))} are not players of {spec.name}")
    return len(sub) >= spec.k


# residual target qubit after the ring Bell measurement, by Bell index 2*i + j
_NEIGHBOUR_FORMS = ("p+m", "p-m", "m-p", "m+p")
_NON_NEIGHBOUR_FORMS = ("m-p", "p+m", "p-m", "m+p")
# alpha|+> + beta|->  ->  H;  alpha|+> - beta|->  ->  Z H;  ...
_FORM_CORRECTION = {
    "p+m": (H,),
    "p-m": (H, Z),
    "m-p": (H, X, Z),
    "m+p": (H, X),
}


@dataclass
class LocalizeResult:
    scheme: str
    subset: tuple[int, ...]
    target: int
    mode: str
    authorized: bool
    steps: list[str] = field(default_factory=list)
    outcomes: list = field(default_factory=list)
    qubit: np.ndarray | None = None  # density matrix of the target qubit
    fidelity: float | None = None

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme,
            "subset": list(self.subset),
            "target": self.target,
            "mode": self.mode,
            "result": "localized" if self.authorized else "denied",
            "steps": self.steps,
            "outcomes": [list(o) if isinstance(o, tuple) else o for o in self.outcomes],
            "target_density": None
            if self.qubit is None
            else [[[float(z.real), float(z.imag)] for z in row] for row in self.qubit],
            "fidelity": self.fidelity,
        }


class _Register:
    """Dense state plus the original vertex label of every remaining qubit."""

    def __init__(self, psi: DenseState, rng: np.random.Generator | None, branch: Sequence[int] | None):
        self.psi = psi
        self.alive = list(range(psi.n))
        self.rng = rng
        self.branch = list(branch) if branch is not None else None
        self.outcomes: list = []

    def _forced(self) -> int | None:
        if self.branch is None:
            return None
        if not self.branch:
            raise DomainError("forced branch list is too short")
        return self.branch.pop(0)

    def measure(self, v: int, basis: str) -> int:
        s, self.psi = measure_qubit(self.psi, self.alive.index(v), basis, self.rng, self._forced())
        self.alive.remove(v)
        self.outcomes.append(s)
        return s

    def bell(self, a: int, b: int) -> int:
        (i, j), self.psi = bell_measure(
            self.psi, self.alive.index(a), self.alive.index(b), self.rng, self._forced()
        )
        self.alive.remove(a)
        self.alive.remove(b)
        self.outcomes.append((i, j))
        return 2 * i + j

    def apply(self, v: int, u: np.ndarray) -> None:
        self.psi = apply_single(self.psi, self.alive.index(v), u)

    def qubit(self, v: int) -> np.ndarray:
        return reduced_density(self.psi, [self.alive.index(v)])


def _ring_plan(spec: SchemeSpec, subset: Sequence[int], target: int) -> tuple[int, tuple[int, int], tuple[str, ...]]:
    # pick a vertex u of the subset whose two neighbours, or two non-neighbours, are also in it
    n = spec.graph.n
    sub = set(subset)
    order = [target] + [u for u in sorted(sub) if u != target]
    for u in order:
        nb = ((u - 1) % n, (u + 1) % n)
        far = ((u + 2) % n, (u + 3) % n)
        if set(nb) <= sub:
            return u, (min(nb), max(nb)), _NEIGHBOUR_FORMS
        if set(far) <= sub:
            return u, (min(far), max(far)), _NON_NEIGHBOUR_FORMS
    raise AssertionError("every 3-subset of the 5-ring has a localizable vertex")


def qq_localize(
    state: DenseState,
    spec: SchemeSpec,
    subset: Iterable[int],
    target: int,
    mode: str,
    secret: Sequence[complex],
    rng: np.random.Generator | None = None,
    branch: Sequence[int] | None = None,
) -> LocalizeResult:
    """Move the shared secret onto ``target`` and report the fidelity with ``secret``.

    Star schemes (and trees, for the centre) use single-qubit measurements and
    one local correction. The 5-ring uses a Bell measurement on two other
    players and, when needed, sends the localized qubit to the target over a
    quantum channel. ``branch`` forces measurement outcomes in order (Bell
    outcomes as ``2*i + j``).
    """
    sub = tuple(sorted(set(subset)))
    if target not in sub:
        raise DomainError(f"target {target} is not in the subset {list(sub)}")
    if mode not in ("locc", "joint"):
        raise DomainError(f"mode must be 'locc' or 'joint', got {mode!r}")
    res = LocalizeResult(spec.name, sub, target, mode, qq_authorized(spec, sub))
    if not res.authorized:
        return res
    reg = _Register(state, rng, branch)
    if spec.kind in ("nn", "tree"):
        _localize_star(spec, reg, target, res)
    elif spec.kind == "ring5":
        if mode != "joint":
            raise UnsupportedError("the 5-ring scheme localizes with Bell measurements; use mode 'joint'")
        holder = _localize_ring(spec, reg, sub, target, res)
    else:
        raise UnsupportedError(f"no localization procedure for {spec.name}")
    res.outcomes = reg.outcomes
    # a qubit handed over a quantum channel keeps its register slot
    res.qubit = reg.qubit(holder if spec.kind == "ring5" else target)
    res.fidelity = qubit_fidelity(res.qubit, secret)
    return res


def _localize_star(spec: SchemeSpec, reg: _Register, target: int, res: LocalizeResult) -> None:
    center = spec.center
    leaves = [v for v in spec.players if v != center]
    if target == center:
        parity = 0
        for v in leaves:
            parity ^= reg.measure(v, "Z")
        res.steps.append(f"players {leaves} measure Z")
        if parity:
            reg.apply(target, Z)
        reg.apply(target, H)
        res.steps.append(f"player {target} applies {'H Z' if parity else 'H'}")
        return
    if spec.kind == "tree":
        raise UnsupportedError("tree schemes localize onto the star centre only")
    b = reg.measure(center, "X")
    others = [v for v in leaves if v != target]
    for v in others:
        b ^= reg.measure(v, "Z")
    res.steps.append(f"player {center} measures X, players {others} measure Z")
    if b:
        reg.apply(target, X)
    res.steps.append(f"player {target} applies {'X' if b else 'I'}")


def _localize_ring(spec: SchemeSpec, reg: _Register, sub: Sequence[int], target: int, res: LocalizeResult) -> int:
    u, pair, forms = _ring_plan(spec, sub, target)
    k = reg.bell(*pair)
    res.steps.append(f"players {list(pair)} send their qubits for a Bell measurement")
    names = {H.tobytes(): "H", X.tobytes(): "X", Z.tobytes(): "Z"}
    fix = _FORM_CORRECTION[forms[k]]
    for m in fix:
        reg.apply(u, m)
    res.steps.append(f"player {u} applies {' then '.join(names[m.tobytes()] for m in fix)}")
    if u != target:
        res.steps.append(f"player {u} sends the localized qubit to player {target}")
    return u


def branch_space(spec: SchemeSpec, subset: Sequence[int], target: int) -> list[tuple[int, ...]]:
    """Every forced-outcome sequence the localization of ``subset`` onto ``target`` can take."""
    if spec.kind == "ring5":
        return [(k,) for k in range(4)]
    return list(itertools.product((0, 1), repeat=len(spec.players) - 1))


def unauthorized_distance(spec: SchemeSpec, subset: Iterable[int], secrets: Sequence[Sequence[complex]]) -> float:
    """Largest trace distance between the subset's reduced states over the given secrets."""
    keep = sorted(set(subset))
    rhos = [reduced_density(encoded_secret(spec, *s), keep) for s in secrets]
    return max((trace_distance(rhos[0], r) for r in rhos[1:]), default=0.0)


def random_secret(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)
