"""Graphs, labeled graph states and their graphical rewrite rules.

A labeled graph state on ``n`` vertices is the vector

    omega**phase * prod_i X_i**l1[i] Z_i**l2[i] * prod_{i square} S_i * |G>

with ``omega = exp(i*pi/4)``, ``S = diag(1, i)`` and ``|G>`` the plain graph
state (CZ on every edge applied to ``|+>^n``). Vertex ``0`` is the leftmost
tensor factor everywhere in the package.

Every rule here returns a state that is *equal* to its input (or to the
renormalized post-measurement state) as a vector, global phase included. The
dense-statevector oracle in :mod:`graphqss.dense` checks this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import gf2
from .errors import DomainError, UnsupportedError


def _norm_edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with a distinguished set of square vertices.

    ``squares`` holds the vertices carrying an ``S`` gate (the third label
    bit); all other vertices are circles.
    """

    n: int
    edges: frozenset[tuple[int, int]] = frozenset()
    squares: frozenset[int] = frozenset()
    _adj: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError(f"vertex count must be non-negative, got {self.n}")
        edges = set()
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise DomainError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise DomainError(f"edge {(i, j)} has an endpoint outside 0..{self.n - 1}")
            edges.add(_norm_edge(i, j))
        squares = frozenset(int(v) for v in self.squares)
        for v in squares:
            if not 0 <= v < self.n:
                raise DomainError(f"square vertex {v} outside 0..{self.n - 1}")
        adj = [0] * self.n
        for i, j in edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "squares", squares)
        object.__setattr__(self, "_adj", tuple(adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], squares: Iterable[int] = ()) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), frozenset(squares))

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise DomainError(f"vertex {v} outside 0..{self.n - 1}")

    def neighbour_mask(self, v: int) -> int:
        self.check_vertex(v)
        return self._adj[v]

    def neighbours(self, v: int) -> frozenset[int]:
        return frozenset(gf2.support(self.neighbour_mask(v)))

    @property
    def adjacency_masks(self) -> tuple[int, ...]:
        return self._adj

    @property
    def square_mask(self) -> int:
        return gf2.mask_of(self.squares)

    def is_square(self, v: int) -> bool:
        return v in self.squares

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def with_squares(self, squares: Iterable[int]) -> "Graph":
        return Graph(self.n, self.edges, frozenset(squares))

    def remove_vertex(self, v: int) -> "Graph":
        """Delete ``v`` and its edges; vertices above ``v`` shift down by one."""
        self.check_vertex(v)

        def m(u: int) -> int:
            return u if u < v else u - 1

        edges = frozenset((m(i), m(j)) for i, j in self.edges if v not in (i, j))
        squares = frozenset(m(u) for u in self.squares if u != v)
        return Graph(self.n - 1, edges, squares)

    def add_vertex(self, neighbours: Iterable[int] = (), square: bool = False) -> "Graph":
        """Append vertex ``n`` joined to ``neighbours``."""
        new = self.n
        nbrs = list(neighbours)
        for u in nbrs:
            self.check_vertex(u)
        edges = set(self.edges) | {(u, new) for u in nbrs}
        squares = set(self.squares) | ({new} if square else set())
        return Graph(self.n + 1, frozenset(edges), frozenset(squares))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph on ``vertices`` renumbered in the given order."""
        pos = {v: k for k, v in enumerate(vertices)}
        edges = frozenset(
            (pos[i], pos[j]) for i, j in self.edges if i in pos and j in pos
        )
        return Graph(len(vertices), edges, frozenset(pos[v] for v in self.squares if v in pos))

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in gf2.support(frontier):
                nxt |= self._adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1


def neighbours(g: Graph, v: int) -> frozenset[int]:
    """The neighbourhood of ``v``."""
    return g.neighbours(v)


def local_complement(g: Graph, v: int) -> Graph:
    """Toggle every edge between two neighbours of ``v``; squares unchanged."""
    nbrs = sorted(g.neighbours(v))
    edges = set(g.edges)
    for a in range(len(nbrs)):
        for b in range(a + 1, len(nbrs)):
            edges ^= {(nbrs[a], nbrs[b])}
    return Graph(g.n, frozenset(edges), g.squares)


@dataclass(frozen=True)
class LabelVector:
    """Per-vertex label pairs ``(l1, l2)``: the operator ``X**l1 Z**l2`` on each vertex."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(a) & 1, int(b) & 1) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def zeros(cls, n: int) -> "LabelVector":
        return cls(((0, 0),) * n)

    @classmethod
    def encoded(cls, second: Sequence[int]) -> "LabelVector":
        """Labels ``(0, l2)``: the encoded graph state carrying bit string ``second``."""
        return cls(tuple((0, int(b)) for b in second))

    @classmethod
    def from_masks(cls, first: int, second: int, n: int) -> "LabelVector":
        return cls(tuple(((first >> i) & 1, (second >> i) & 1) for i in range(n)))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __getitem__(self, i: int) -> tuple[int, int]:
        return self.pairs[i]

    @property
    def first(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self.pairs)

    @property
    def second(self) -> tuple[int, ...]:
        return tuple(p[1] for p in self.pairs)

    @property
    def first_mask(self) -> int:
        return gf2.mask(self.first)

    @property
    def second_mask(self) -> int:
        return gf2.mask(self.second)

    def is_encoded(self) -> bool:
        return not any(self.first)


@dataclass(frozen=True)
class LabeledGraphState:
    """A labeled graph state with its global phase ``omega**phase`` (``phase`` mod 8)."""

    graph: Graph
    labels: LabelVector
    phase: int = 0

    def __post_init__(self) -> None:
        if len(self.labels) != self.graph.n:
            raise DomainError(
                f"label vector has length {len(self.labels)}, graph has {self.graph.n} vertices"
            )
        object.__setattr__(self, "phase", int(self.phase) % 8)

    @classmethod
    def encoded(cls, graph: Graph, second: Sequence[int] | None = None) -> "LabeledGraphState":
        if second is None:
            second = [0] * graph.n
        return cls(graph, LabelVector.encoded(second))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def phase_factor(self) -> complex:
        return complex(np.exp(1j * np.pi * self.phase / 4))

    def is_encoded(self) -> bool:
        return self.labels.is_encoded()


def apply_stabilizer(s: LabeledGraphState, j: int) -> LabeledGraphState:
    """Rewrite ``s`` by inserting the stabilizer ``K_j`` of the unlabeled state.

    ``K_j |G~> = |G~>`` for the squared graph state ``|G~>``, so ``L |G~> = (L K_j) |G~>``.
    Bringing ``L K_j`` back to the canonical ``X**a Z**b`` form per vertex gives new
    labels and a phase.
    """
    g = s.graph
    g.check_vertex(j)
    x = s.labels.first_mask
    z = s.labels.second_mask
    sq = 1 if g.is_square(j) else 0
    # K_j = i**sq * X_j * Z**(N_j + sq*e_j) in X-before-Z form;
    # X^x Z^z X^x' Z^z' = (-1)^{z.x'} X^{x^x'} Z^{z^z'}
    sign = (z >> j) & 1
    new_x = x ^ (1 << j)
    new_z = z ^ g.neighbour_mask(j) ^ (sq << j)
    phase = s.phase + 2 * sq + 4 * sign
    return LabeledGraphState(g, LabelVector.from_masks(new_x, new_z, g.n), phase)


def shuffle_p1(s: LabeledGraphState, i: int, j: int) -> LabeledGraphState:
    """Move the dependency on vertex ``i``'s second label onto its neighbour ``j``.

    Vertex ``i``'s ``l2`` is cleared, ``j`` picks up ``l1 ^= l_i2`` (and ``l2 ^=
    l_i2`` when ``j`` is a square), and every other neighbour ``k`` of ``j``
    picks up ``l_k2 ^= l_i2``. The result is the same vector as ``s``.
    """
    g = s.graph
    g.check_vertex(i)
    g.check_vertex(j)
    if j not in g.neighbours(i):
        raise DomainError(f"vertex {j} is not a neighbour of {i}")
    if s.labels[i][1] == 0:
        return s
    return apply_stabilizer(s, j)


def measure_z_rule(s: LabeledGraphState, v: int, outcome: int) -> LabeledGraphState:
    """Post-measurement state after measuring ``Z_v`` with bit ``outcome``.

    ``outcome`` 0 means eigenvalue +1. The returned state lives on the graph with
    ``v`` deleted and equals ``<outcome|_v psi`` renormalized.
    """
    g = s.graph
    g.check_vertex(v)
    if g.is_square(v):
        raise UnsupportedError("Z-measurement rule is defined for circle vertices only")
    if outcome not in (0, 1):
        raise DomainError(f"outcome must be 0 or 1, got {outcome}")
    l1, l2 = s.labels[v]
    b = outcome ^ l1  # computational value before the X label
    nbr = g.neighbour_mask(v)
    x = s.labels.first_mask
    z = s.labels.second_mask ^ (nbr if b else 0)
    phase = s.phase + 4 * (l2 & b)
    return _drop_vertex(g.remove_vertex(v), x, z, v, g.n, phase)


def measure_y_rule(s: LabeledGraphState, v: int, outcome: int) -> LabeledGraphState:
    """Post-measurement state after measuring ``Y_v`` with bit ``outcome``.

    Local complementation at ``v``, flip the shape of every neighbour, add
    ``l_v2 ^ outcome`` to each neighbour's second label, delete ``v``. A
    neighbour that was already a square returns to a circle and gains one more
    ``Z`` (``S**2 = Z``). The residual state is ``<y_outcome|_v psi``
    renormalized, with ``|y_0> = (|0> + i|1>)/sqrt2`` and ``|y_1> = (|0> - i|1>)/sqrt2``.
    """
    g = s.graph
    g.check_vertex(v)
    if g.is_square(v):
        raise UnsupportedError("Y-measurement rule is defined for circle vertices only")
    if outcome not in (0, 1):
        raise DomainError(f"outcome must be 0 or 1, got {outcome}")
    nbr = g.neighbour_mask(v)
    x = s.labels.first_mask
    if (x >> v) & 1 or x & nbr:
        raise UnsupportedError("Y-measurement rule needs l1 = 0 on the measured vertex and its neighbours")
    t = outcome ^ s.labels[v][1]
    sq = g.square_mask
    z = s.labels.second_mask
    z ^= nbr if t else 0
    z ^= sq & nbr  # S**2 = Z on neighbours that were already squares
    new_sq = sq ^ nbr
    lc = local_complement(g, v).with_squares(gf2.support(new_sq))
    phase = s.phase + (1 if t else -1)
    return _drop_vertex(lc.remove_vertex(v), x, z, v, g.n, phase)


def _drop_vertex(graph: Graph, x: int, z: int, v: int, n: int, phase: int) -> LabeledGraphState:
    low = (1 << v) - 1

    def squeeze(m: int) -> int:
        return (m & low) | ((m >> (v + 1)) << v)

    return LabeledGraphState(graph, LabelVector.from_masks(squeeze(x), squeeze(z), n - 1), phase)


def conjugate_graph(g: Graph, v: int) -> Graph:
    """The graph left after a ``Y`` measurement at ``v``.

    Local complementation at ``v``, neighbours of ``v`` become squares, ``v`` is
    deleted.
    """
    g.check_vertex(v)
    if g.is_square(v):
        raise UnsupportedError(f"vertex {v} is a square vertex; the Y rule covers circle vertices only")
    nbr = g.neighbour_mask(v)
    lc = local_complement(g, v).with_squares(gf2.support(g.square_mask ^ nbr))
    return lc.remove_vertex(v)


@dataclass(frozen=True)
class SymbolicLabels:
    """Labels whose bits are GF(2) linear forms in the original second labels.

    ``first[i]`` and ``second[i]`` are int masks over variables; variable ``k``
    stands for the original ``l_k2``. Global phases (which become quadratic in
    the variables) are not tracked at this level.
    """

    first: tuple[int, ...]
    second: tuple[int, ...]

    @classmethod
    def encoded(cls, n: int) -> "SymbolicLabels":
        return cls((0,) * n, tuple(1 << i for i in range(n)))

    def evaluate(self, bits: Sequence[int]) -> LabelVector:
        value = gf2.mask(bits)
        return LabelVector(
            tuple((gf2.dot(a, value), gf2.dot(b, value)) for a, b in zip(self.first, self.second))
        )

    def describe(self, one_based: bool = True) -> list[tuple[str, str]]:
        off = 1 if one_based else 0

        def form(m: int) -> str:
            if not m:
                return "0"
            return "+".join(f"l{k + off}2" for k in gf2.support(m))

        return [(form(a), form(b)) for a, b in zip(self.first, self.second)]


def shuffle_symbolic(g: Graph, labels: SymbolicLabels, i: int, j: int) -> SymbolicLabels:
    """:func:`shuffle_p1` acting on symbolic labels."""
    g.check_vertex(i)
    if j not in g.neighbours(i):
        raise DomainError(f"vertex {j} is not a neighbour of {i}")
    f = labels.second[i]
    first = list(labels.first)
    second = list(labels.second)
    first[j] ^= f
    if g.is_square(j):
        second[j] ^= f
    for k in g.neighbours(j):
        second[k] ^= f
    return SymbolicLabels(tuple(first), tuple(second))
