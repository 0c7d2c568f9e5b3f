from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphqss import gf2
from graphqss.dense import exact_distance, labeled_state, measure_qubit
from graphqss.errors import DomainError, UnsupportedError
from graphqss.graph_core import (
    Graph,
    LabeledGraphState,
    LabelVector,
    SymbolicLabels,
    apply_stabilizer,
    conjugate_graph,
    local_complement,
    measure_y_rule,
    measure_z_rule,
    neighbours,
    shuffle_p1,
    shuffle_symbolic,
)
from graphqss.schemes import attach_dealer, build_nghzm, build_ring
from graphqss.verify import conjugate_error, random_graph


@st.composite
def graphs(draw, max_n: int = 6, squares: bool = True) -> Graph:
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [p for p in pairs if draw(st.booleans())]
    sq = [v for v in range(n) if squares and draw(st.booleans())]
    return Graph.from_edges(n, edges, sq)


@st.composite
def labeled_states(draw, max_n: int = 6, squares: bool = True) -> LabeledGraphState:
    g = draw(graphs(max_n, squares))
    bits = draw(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=g.n, max_size=g.n))
    return LabeledGraphState(g, LabelVector(tuple(bits)), draw(st.integers(0, 7)))


class TestGraph:
    def test_star_neighbours(self, star4):
        assert neighbours(star4, 0) == {1, 2, 3}

    def test_edgeless(self):
        g = Graph.from_edges(3, [])
        assert all(neighbours(g, v) == frozenset() for v in range(3))

    def test_ring_neighbours(self, ring5):
        assert neighbours(ring5, 2) == {1, 3}

    @pytest.mark.parametrize("v", [-1, 4, 10])
    def test_out_of_range(self, star4, v):
        with pytest.raises(DomainError):
            neighbours(star4, v)

    @pytest.mark.parametrize("edges", [[(0, 0)], [(0, 5)], [(-1, 2)]])
    def test_bad_edges_rejected(self, edges):
        with pytest.raises(DomainError):
            Graph.from_edges(3, edges)

    def test_reversed_duplicate_is_one_edge(self):
        assert Graph.from_edges(2, [(0, 1), (1, 0)]).sorted_edges() == [(0, 1)]

    def test_adjacency_matrix_symmetric(self, ring5):
        a = ring5.adjacency_matrix()
        assert (a == a.T).all() and a.sum() == 10 and np.trace(a) == 0

    def test_remove_vertex_relabels(self, ring5):
        g = ring5.remove_vertex(0)
        assert g.n == 4
        assert g.sorted_edges() == [(0, 1), (1, 2), (2, 3)]


class TestLocalComplement:
    def test_ring4_adds_chord(self, ring4):
        assert set(local_complement(ring4, 0).sorted_edges()) == {(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)}

    def test_star_centre_gives_complete_graph(self, star4):
        lc = local_complement(star4, 0)
        assert set(lc.sorted_edges()) == {(i, j) for i in range(4) for j in range(i + 1, 4)}

    @settings(max_examples=100, deadline=None)
    @given(graphs(7), st.data())
    def test_involution(self, g, data):
        v = data.draw(st.integers(0, g.n - 1))
        assert local_complement(local_complement(g, v), v) == g


class TestShuffle:
    def test_centre_label_to_leaf(self, star4):
        out = shuffle_symbolic(star4, SymbolicLabels.encoded(4), 0, 3)
        assert out.describe(one_based=False) == [("0", "0"), ("0", "l12"), ("0", "l22"), ("l02", "l32")]

    def test_leaf_label_to_centre(self, star4):
        out = shuffle_symbolic(star4, SymbolicLabels.encoded(4), 1, 0)
        assert out.describe(one_based=False) == [("l12", "l02"), ("0", "0"), ("0", "l12+l22"), ("0", "l12+l32")]

    def test_square_centre_picks_up_extra_z(self, star4):
        g = star4.with_squares([0])
        out = shuffle_symbolic(g, SymbolicLabels.encoded(4), 1, 0)
        assert out.describe(one_based=False)[0] == ("l12", "l02+l12")

    def test_non_neighbour_rejected(self, ring5):
        with pytest.raises(DomainError):
            shuffle_p1(LabeledGraphState(ring5, LabelVector.zeros(5)), 0, 2)

    @settings(max_examples=60, deadline=None)
    @given(labeled_states(5), st.data())
    def test_matches_dense(self, s, data):
        edges = s.graph.sorted_edges()
        if not edges:
            return
        i, j = data.draw(st.sampled_from(edges))
        if data.draw(st.booleans()):
            i, j = j, i
        assert exact_distance(labeled_state(s), labeled_state(shuffle_p1(s, i, j))) < 1e-10

    @settings(max_examples=60, deadline=None)
    @given(graphs(5), st.data())
    def test_symbolic_agrees_with_concrete(self, g, data):
        edges = g.sorted_edges()
        if not edges:
            return
        i, j = data.draw(st.sampled_from(edges))
        bits = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
        sym = shuffle_symbolic(g, SymbolicLabels.encoded(g.n), i, j).evaluate(bits)
        conc = shuffle_p1(LabeledGraphState(g, LabelVector.encoded(bits)), i, j).labels
        assert sym == conc

    @settings(max_examples=60, deadline=None)
    @given(labeled_states(5), st.data())
    def test_stabilizer_application_leaves_state_fixed(self, s, data):
        j = data.draw(st.integers(0, s.graph.n - 1))
        assert exact_distance(labeled_state(s), labeled_state(apply_stabilizer(s, j))) < 1e-10


class TestMeasureZ:
    def test_ring4_vertex0(self, ring4):
        for s in (0, 1):
            for l0 in (0, 1):
                st_ = LabeledGraphState(ring4, LabelVector.encoded([l0, 0, 0, 0]))
                out = measure_z_rule(st_, 0, s)
                assert out.graph.sorted_edges() == [(0, 1), (1, 2)]
                flip = s ^ 0  # first label of the measured vertex is zero here
                assert out.labels.second_mask == (0b101 if flip else 0)

    def test_isolated_vertex(self):
        g = Graph.from_edges(3, [(0, 1)])
        s = LabeledGraphState(g, LabelVector.encoded([1, 0, 1]))
        out = measure_z_rule(s, 2, 0)
        assert out.graph == g.remove_vertex(2)
        assert out.labels == LabelVector.encoded([1, 0])

    def test_square_vertex_unsupported(self, square_centre3):
        with pytest.raises(UnsupportedError):
            measure_z_rule(LabeledGraphState(square_centre3, LabelVector.zeros(3)), 0, 0)

    @settings(max_examples=80, deadline=None)
    @given(labeled_states(5), st.data())
    def test_matches_dense(self, s, data):
        circles = [v for v in range(s.graph.n) if not s.graph.is_square(v)]
        if not circles:
            return
        v = data.draw(st.sampled_from(circles))
        outcome = data.draw(st.integers(0, 1))
        _, post = measure_qubit(labeled_state(s), v, "Z", outcome=outcome)
        assert exact_distance(post, labeled_state(measure_z_rule(s, v, outcome))) < 1e-10


class TestMeasureY:
    def test_ring4_vertex0(self, ring4):
        out = measure_y_rule(LabeledGraphState(ring4, LabelVector.zeros(4)), 0, 0)
        assert set(out.graph.sorted_edges()) == {(0, 1), (1, 2), (0, 2)}
        assert out.graph.squares == frozenset({0, 2})

    def test_isolated_vertex(self):
        g = Graph.from_edges(2, [])
        out = measure_y_rule(LabeledGraphState(g, LabelVector.encoded([0, 1])), 0, 0)
        assert out.graph == Graph.from_edges(1, [])
        assert out.labels == LabelVector.encoded([1])

    def test_square_vertex_unsupported(self, square_centre3):
        with pytest.raises(UnsupportedError):
            measure_y_rule(LabeledGraphState(square_centre3, LabelVector.zeros(3)), 0, 0)

    def test_x_label_in_neighbourhood_rejected(self, ring4):
        s = LabeledGraphState(ring4, LabelVector(((0, 0), (1, 0), (0, 0), (0, 0))))
        with pytest.raises(DomainError):
            measure_y_rule(s, 0, 0)

    @settings(max_examples=80, deadline=None)
    @given(graphs(5), st.data())
    def test_matches_dense(self, g, data):
        circles = [v for v in range(g.n) if not g.is_square(v)]
        if not circles:
            return
        bits = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
        s = LabeledGraphState(g, LabelVector.encoded(bits), data.draw(st.integers(0, 7)))
        v = data.draw(st.sampled_from(circles))
        outcome = data.draw(st.integers(0, 1))
        _, post = measure_qubit(labeled_state(s), v, "Y", outcome=outcome)
        assert exact_distance(post, labeled_state(measure_y_rule(s, v, outcome))) < 1e-10


class TestConjugateGraph:
    def test_star_dealer(self):
        g = attach_dealer(build_nghzm(3), [0])
        cg = conjugate_graph(g, 3)
        # dealer removed; the centre becomes a square vertex
        assert cg.n == 3
        assert cg.sorted_edges() == [(0, 1), (0, 2)]
        assert cg.squares == frozenset({0})

    def test_ring5_dealer_is_a_relabelled_ring(self):
        g = attach_dealer(build_ring(5), range(5))
        cg = conjugate_graph(g, 5)
        assert cg.n == 5
        assert all(len(cg.neighbours(v)) == 2 for v in range(5))
        assert cg.is_connected()
        assert cg.squares == frozenset(range(5))

    @pytest.mark.parametrize("seed", range(25))
    def test_relation_on_random_graphs(self, seed):
        r = np.random.default_rng(seed)
        g = random_graph(int(r.integers(2, 7)), r, p_square=0.0)
        for v in range(g.n):
            assert conjugate_error(g, v) < 1e-10

    def test_square_vertex_unsupported(self, square_centre3):
        with pytest.raises(UnsupportedError):
            conjugate_graph(square_centre3, 0)


class TestLabels:
    def test_encoded(self):
        lv = LabelVector.encoded([1, 0, 1])
        assert lv.is_encoded() and lv.second_mask == 0b101 and lv.first_mask == 0

    def test_from_masks(self):
        lv = LabelVector.from_masks(0b01, 0b10, 2)
        assert lv.pairs == ((1, 0), (0, 1))

    def test_phase_is_mod_8(self, star4):
        assert LabeledGraphState(star4, LabelVector.zeros(4), 11).phase == 3
        assert gf2.mask([1]) == 1
