"""Symbolic rewrite rules checked against the dense simulator on many graphs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .dense import (
    BASIS_VECTORS,
    DenseState,
    Z,
    apply_labels,
    apply_single,
    build_graph_state,
    exact_distance,
    labeled_state,
    measure_qubit,
)
from .graph_core import (
    Graph,
    LabeledGraphState,
    LabelVector,
    conjugate_graph,
    measure_y_rule,
    measure_z_rule,
    shuffle_p1,
)
from .schemes import attach_dealer, build_nghzm, build_ring

OMEGA = np.exp(1j * np.pi / 4)


def random_graph(n: int, rng: np.random.Generator, p_edge: float = 0.5, p_square: float = 0.3) -> Graph:
    """Random connected graph: a random spanning tree plus extra edges."""
    order = rng.permutation(n)
    edges = {tuple(sorted((int(order[k]), int(order[rng.integers(k)])))) for k in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p_edge:
                edges.add((i, j))
    squares = [v for v in range(n) if rng.random() < p_square]
    return Graph.from_edges(n, edges, squares)


def named_graphs() -> dict[str, Graph]:
    star4 = build_nghzm(4)
    ring4 = build_ring(4)
    ring5 = build_ring(5)
    return {
        "three-vertex square centre": Graph.from_edges(3, [(0, 1), (0, 2)], [0]),
        "star4": star4,
        "star4 square centre": star4.with_squares([0]),
        "ring4": ring4,
        "ring5": ring5,
        "star4 + dealer": attach_dealer(star4, [0]),
        "ring4 + dealer": attach_dealer(ring4, range(4)),
        "ring5 + dealer": attach_dealer(ring5, range(5)),
    }


@dataclass
class RuleStats:
    cases: int = 0
    max_error: float = 0.0
    max_probability_error: float = 0.0
    failures: list[str] = field(default_factory=list)

    def record(self, err: float, where: str, tol: float, prob_err: float = 0.0) -> None:
        self.cases += 1
        self.max_error = max(self.max_error, err)
        self.max_probability_error = max(self.max_probability_error, prob_err)
        if (err > tol or prob_err > tol) and len(self.failures) < 10:
            self.failures.append(where)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "cases": self.cases,
            "max_error": self.max_error,
            "max_probability_error": self.max_probability_error,
            "passed": self.ok,
            "failures": self.failures,
        }


@dataclass
class VerifyReport:
    graphs: int
    rules: dict[str, RuleStats]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rules.values())

    def to_json(self) -> dict:
        return {"graphs": self.graphs, "passed": self.ok, "rules": {k: v.to_json() for k, v in self.rules.items()}}


def _random_labels(n: int, rng: np.random.Generator) -> LabelVector:
    return LabelVector(tuple((int(a), int(b)) for a, b in rng.integers(0, 2, size=(n, 2))))


def check_graph(g: Graph, rng: np.random.Generator, stats: dict[str, RuleStats], name: str, tol: float) -> None:
    encoded = LabeledGraphState(g, LabelVector.encoded(rng.integers(0, 2, g.n).tolist()), int(rng.integers(8)))
    general = LabeledGraphState(g, _random_labels(g.n, rng), int(rng.integers(8)))
    for s, kind in ((encoded, "encoded"), (general, "general")):
        psi = labeled_state(s)
        for i in range(g.n):
            for j in sorted(g.neighbours(i)):
                err = exact_distance(psi, labeled_state(shuffle_p1(s, i, j)))
                stats["shuffle_p1"].record(err, f"{name} {kind} i={i} j={j}", tol)
        for v in range(g.n):
            if g.is_square(v):
                continue
            for outcome in (0, 1):
                p = _branch_probability(psi, v, "Z", outcome)
                _, post = measure_qubit(psi, v, "Z", outcome=outcome)
                err = exact_distance(post, labeled_state(measure_z_rule(s, v, outcome)))
                stats["measure_z_rule"].record(err, f"{name} {kind} v={v} s={outcome}", tol, abs(p - 0.5))
            if s.labels.first_mask & (g.neighbour_mask(v) | (1 << v)):
                continue
            for outcome in (0, 1):
                p = _branch_probability(psi, v, "Y", outcome)
                _, post = measure_qubit(psi, v, "Y", outcome=outcome)
                err = exact_distance(post, labeled_state(measure_y_rule(s, v, outcome)))
                stats["measure_y_rule"].record(err, f"{name} {kind} v={v} s={outcome}", tol, abs(p - 0.5))
    if not g.squares:
        for v in range(g.n):
            stats["conjugate_graph"].record(conjugate_error(g, v), f"{name} v={v}", tol)


def _branch_probability(psi: DenseState, v: int, basis: str, outcome: int) -> float:
    t = np.moveaxis(psi.tensor(), v, 0).reshape(2, -1)
    amp = np.conj(BASIS_VECTORS[basis][outcome]) @ t
    return float(np.vdot(amp, amp).real)


def conjugate_states(g: Graph, v: int) -> tuple[DenseState, DenseState, DenseState, DenseState]:
    """``(g0, g1, h0, h1)``: the Z-pair on ``G - v`` and the encoded pair on the conjugate graph.

    ``g1 = Z_{N_v} g0`` and ``h_t`` carries second labels ``t`` on ``N_v``.
    """
    rest = g.remove_vertex(v)
    nbrs = [u if u < v else u - 1 for u in sorted(g.neighbours(v))]
    g0 = build_graph_state(rest)
    g1 = g0
    for u in nbrs:
        g1 = apply_single(g1, u, Z)
    conj = conjugate_graph(g, v)
    h0 = build_graph_state(conj)
    flip = LabelVector.encoded([1 if u in nbrs else 0 for u in range(conj.n)])
    return g0, g1, h0, apply_labels(h0, flip)


def conjugate_error(g: Graph, v: int) -> float:
    """Deviation from ``h0 = w (g0 - i g1)/sqrt2`` and ``h1 = w* (g0 + i g1)/sqrt2`` with ``w = e^{i pi/4}``."""
    g0, g1, h0, h1 = conjugate_states(g, v)
    want0 = OMEGA * (g0.amplitudes - 1j * g1.amplitudes) / np.sqrt(2)
    want1 = np.conj(OMEGA) * (g0.amplitudes + 1j * g1.amplitudes) / np.sqrt(2)
    return max(
        float(np.linalg.norm(h0.amplitudes - want0)),
        float(np.linalg.norm(h1.amplitudes - want1)),
    )


def run_suite(n_random: int = 500, max_n: int = 6, seed: int = 0, tol: float = 1e-10) -> VerifyReport:
    rng = np.random.default_rng(seed)
    stats = {k: RuleStats() for k in ("shuffle_p1", "measure_z_rule", "measure_y_rule", "conjugate_graph")}
    graphs = 0
    for name, g in named_graphs().items():
        check_graph(g, rng, stats, name, tol)
        graphs += 1
    for k in range(n_random):
        n = int(rng.integers(2, max_n + 1))
        # every fourth random graph is all circles so the conjugate rule is exercised
        g = random_graph(n, rng, p_square=0.0 if k % 4 == 0 else 0.3)
        check_graph(g, rng, stats, f"random#{k} n={n} edges={g.sorted_edges()} squares={sorted(g.squares)}", tol)
        graphs += 1
    return VerifyReport(graphs, stats)


def orthonormality_error(g: Graph) -> float:
    """``max |<G_a|G_b> - delta_ab|`` over all encoded label vectors."""
    base = build_graph_state(g)
    states = np.array(
        [apply_labels(base, LabelVector.encoded(gf2.unpack(m, g.n))).amplitudes for m in range(1 << g.n)]
    )
    gram = states.conj() @ states.T
    return float(np.abs(gram - np.eye(len(states))).max())
