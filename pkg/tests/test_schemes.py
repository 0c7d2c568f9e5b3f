from __future__ import annotations

import json

import numpy as np
import pytest

from graphqss import gf2
from graphqss.access import verify_threshold
from graphqss.errors import DomainError, UnsupportedError
from graphqss.graph_core import Graph, conjugate_graph
from graphqss.schemes import (
    attach_dealer,
    build_ghz_tree,
    build_nghzm,
    build_ring,
    builtin_schemes,
    nn_scheme,
    parse_scheme,
    random_ghz_tree,
    ring4_scheme,
    ring5_scheme,
    tree_scheme,
)


class TestBuilders:
    def test_star(self):
        assert build_nghzm(4).sorted_edges() == [(0, 1), (0, 2), (0, 3)]

    def test_two_vertex_star_is_an_edge(self):
        assert build_nghzm(2).sorted_edges() == [(0, 1)]

    def test_star_too_small(self):
        with pytest.raises(DomainError):
            build_nghzm(1)

    @pytest.mark.parametrize("n", [4, 5])
    def test_ring(self, n):
        g = build_ring(n)
        assert len(g.edges) == n and all(len(g.neighbours(v)) == 2 for v in range(n))

    def test_dealer_on_star(self):
        g = attach_dealer(build_nghzm(4), [0])
        assert g.n == 5 and g.neighbours(4) == {0}

    def test_dealer_needs_anchors(self):
        with pytest.raises(DomainError):
            attach_dealer(build_nghzm(4), [])

    def test_dealer_conjugate_of_star_is_square_centre_star(self):
        cg = conjugate_graph(attach_dealer(build_nghzm(4), [0]), 4)
        assert cg.sorted_edges() == [(0, 1), (0, 2), (0, 3)] and cg.squares == {0}

    def test_ring5_dealer_stabilizers(self):
        from graphqss.pauli import graph_stabilizers

        ks = [str(k) for k in graph_stabilizers(attach_dealer(build_ring(5), range(5)))]
        assert ks[5] == "+ZZZZZX"
        assert ks[0] == "+XZIIZZ"

    def test_tree_without_second_player(self):
        g = build_ghz_tree(3, {1: [0]}, Graph.from_edges(1, []))
        assert g.sorted_edges() == [(0, 1), (0, 2), (1, 3)]
        assert verify_threshold(g, gf2.mask_of([0]), 3, players=(0, 1, 2)).passed

    def test_tree_empty_attachments(self):
        assert build_ghz_tree(5) == build_nghzm(5)

    def test_tree_rejects_centre_attachment(self):
        with pytest.raises(DomainError):
            build_ghz_tree(3, {0: [0]}, Graph.from_edges(1, []))

    def test_tree_overlapping_attachments(self):
        g = build_ghz_tree(4, {1: [0, 1], 2: [1]}, Graph.from_edges(2, [(0, 1)]))
        assert g.neighbours(5) == {1, 2, 4}

    @pytest.mark.parametrize("seed", range(10))
    def test_random_trees_keep_star(self, seed):
        r = np.random.default_rng(seed)
        n = int(r.integers(3, 6))
        g = random_ghz_tree(n, int(r.integers(1, 4)), r)
        spec = tree_scheme(g, n)
        assert verify_threshold(g, spec.encoding, n, players=spec.players).passed


class TestSchemes:
    def test_parse(self):
        assert parse_scheme("nn:5").graph == build_nghzm(5)
        assert parse_scheme("ring5").k == 3
        assert parse_scheme("ring4").k == 3

    @pytest.mark.parametrize("bad", ["nn:x", "ring6", "tree", "star:3", "ring5:1"])
    def test_parse_rejects(self, bad):
        with pytest.raises(DomainError):
            parse_scheme(bad)

    def test_parse_tree_file(self, tmp_path):
        p = tmp_path / "t.json"
        p.write_text(json.dumps({"n": 4, "edges": [[0, 1], [0, 2], [2, 3]], "players": 3}))
        spec = parse_scheme(f"tree:{p}")
        assert spec.kind == "tree" and spec.players == (0, 1, 2)

    def test_ring4_has_no_dealer_graph(self):
        with pytest.raises(UnsupportedError):
            ring4_scheme().dealer_graph()

    def test_labels_for_secret(self):
        spec = ring5_scheme()
        assert spec.labels_for(1) == [1] * 5
        assert nn_scheme(4).labels_for(1) == [1, 0, 0, 0]

    def test_tree_scheme_validation(self):
        with pytest.raises(DomainError):
            tree_scheme(build_ring(5), 3)

    def test_builtins(self):
        names = [s.name for s in builtin_schemes()]
        assert "ring4" in names and "ring5" in names and "nn:3" in names
