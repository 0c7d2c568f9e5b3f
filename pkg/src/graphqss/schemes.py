"""Named graphs and the sharing schemes built on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import gf2
from .errors import DomainError, UnsupportedError
from .graph_core import Graph, conjugate_graph


def build_nghzm(n: int) -> Graph:
    """Star on ``n`` vertices with centre ``0``."""
    if n < 2:
        raise DomainError(f"star needs at least 2 vertices, got {n}")
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def build_ring(n: int) -> Graph:
    if n not in (4, 5):
        raise DomainError(f"only 4- and 5-rings are sharing schemes, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def attach_dealer(g: Graph, anchors: Iterable[int]) -> Graph:
    """Append a dealer vertex (index ``g.n``) joined to ``anchors``."""
    anchors = sorted(set(anchors))
    if not anchors:
        raise DomainError("dealer needs at least one anchor")
    return g.add_vertex(anchors)


def build_ghz_tree(
    n: int,
    attachments: Mapping[int, Iterable[int]] | None = None,
    extra: Graph | None = None,
) -> Graph:
    """A star on ``0..n-1`` with an extra graph glued onto its leaves.

    ``extra`` has its own vertices ``0..m-1``, placed at ``n..n+m-1``.
    ``attachments[leaf]`` lists the extra vertices joined to that leaf; sets for
    different leaves may overlap. The centre never gains a neighbour.
    """
    star = build_nghzm(n)
    attachments = dict(attachments or {})
    m = extra.n if extra is not None else 0
    if 0 in attachments and list(attachments[0]):
        raise DomainError("attachments may not touch the star centre")
    edges = set(star.edges)
    if extra is not None:
        edges |= {(i + n, j + n) for i, j in extra.edges}
    for leaf, targets in attachments.items():
        if not 1 <= leaf < n:
            raise DomainError(f"attachment leaf {leaf} outside 1..{n - 1}")
        for t in targets:
            if not 0 <= t < m:
                raise DomainError(f"attachment target {t} outside the extra graph 0..{m - 1}")
            edges.add((leaf, n + t))
    return Graph(n + m, frozenset(edges))


def random_ghz_tree(n: int, m: int, rng: np.random.Generator, p_edge: float = 0.4) -> Graph:
    """Random tree-embedded star: ``m`` extra vertices, each joined to at least one leaf."""
    extra_edges = [(i, j) for i in range(m) for j in range(i + 1, m) if rng.random() < p_edge]
    attach: dict[int, set[int]] = {leaf: set() for leaf in range(1, n)}
    for t in range(m):
        leaves = [leaf for leaf in range(1, n) if rng.random() < p_edge]
        if not leaves:
            leaves = [int(rng.integers(1, n))]
        for leaf in leaves:
            attach[leaf].add(t)
    return build_ghz_tree(n, attach, Graph.from_edges(m, extra_edges))


@dataclass(frozen=True)
class SchemeSpec:
    """A graph, who holds which vertex, and how the secret bit is written into labels.

    The secret ``b`` is encoded as ``l2 = b * encoding``. ``dealer_anchors`` is
    where a dealer vertex attaches for the quantum-channel protocols; ``None``
    means those protocols are not available for this scheme.
    """

    name: str
    kind: str
    graph: Graph
    players: tuple[int, ...]
    encoding: int
    k: int
    center: int | None = None
    dealer_anchors: tuple[int, ...] | None = None

    @property
    def n_players(self) -> int:
        return len(self.players)

    def encoding_bits(self) -> list[int]:
        return gf2.unpack(self.encoding, self.graph.n)

    def labels_for(self, secret: int) -> list[int]:
        return [secret & b for b in self.encoding_bits()]

    def dealer_graph(self) -> Graph:
        if self.dealer_anchors is None:
            raise UnsupportedError(f"scheme {self.name} has no quantum-channel version")
        return attach_dealer(self.graph, self.dealer_anchors)

    @property
    def dealer(self) -> int:
        return self.graph.n

    def conjugate(self) -> Graph:
        """Graph the players share after the dealer measures ``Y``."""
        g = attach_dealer(self.graph, self.dealer_anchors or range(self.graph.n))
        return conjugate_graph(g, g.n - 1)

    def dealer_mask(self) -> int:
        """Second-label flip the players see when the dealer's outcome flips."""
        return gf2.mask_of(self.dealer_anchors or ())


def nn_scheme(n: int) -> SchemeSpec:
    g = build_nghzm(n)
    return SchemeSpec(f"nn:{n}", "nn", g, tuple(range(n)), 1, n, center=0, dealer_anchors=(0,))


def ring4_scheme() -> SchemeSpec:
    g = build_ring(4)
    return SchemeSpec("ring4", "ring4", g, tuple(range(4)), 0b1111, 3)


def ring5_scheme() -> SchemeSpec:
    g = build_ring(5)
    return SchemeSpec("ring5", "ring5", g, tuple(range(5)), 0b11111, 3, dealer_anchors=tuple(range(5)))


def tree_scheme(g: Graph, n_players: int, name: str = "tree") -> SchemeSpec:
    """Scheme on a graph whose vertices ``0..n_players-1`` form a star with centre ``0``."""
    if not 2 <= n_players <= g.n:
        raise DomainError(f"player count {n_players} outside 2..{g.n}")
    star = frozenset(range(1, n_players))
    if g.neighbours(0) != star:
        raise DomainError("vertex 0 must be joined to exactly the other players")
    for a in range(1, n_players):
        for b in range(a + 1, n_players):
            if b in g.neighbours(a):
                raise DomainError(f"players {a} and {b} are joined; the star is not embedded")
    if g.squares:
        raise DomainError("tree schemes use circle vertices only")
    return SchemeSpec(name, "tree", g, tuple(range(n_players)), 1, n_players, center=0, dealer_anchors=(0,))


def parse_scheme(text: str) -> SchemeSpec:
    """``nn:N``, ``ring4``, ``ring5`` or ``tree:PATH``."""
    from .io import load_tree

    kind, _, arg = text.partition(":")
    if kind == "nn":
        try:
            n = int(arg)
        except ValueError:
            raise DomainError(f"bad player count in scheme {text!r}") from None
        return nn_scheme(n)
    if kind == "ring4" and not arg:
        return ring4_scheme()
    if kind == "ring5" and not arg:
        return ring5_scheme()
    if kind == "tree" and arg:
        g, players = load_tree(arg)
        return tree_scheme(g, players, name=f"tree:{arg}")
    raise DomainError(f"unknown scheme {text!r}")


def builtin_schemes() -> list[SchemeSpec]:
    return [nn_scheme(n) for n in range(3, 8)] + [ring4_scheme(), ring5_scheme()]
