from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphqss.dense import DenseState, labeled_state, phase_aligned_distance
from graphqss.errors import DomainError, ResourceError
from graphqss.graph_core import Graph, LabeledGraphState, LabelVector
from graphqss.pauli import PauliOperator, graph_stabilizers
from graphqss.schemes import build_nghzm
from graphqss.tableau import (
    StabilizerTableau,
    measure_many,
    tableau_from_graph,
    tableau_measure,
    to_dense,
)

from .test_graph_core import labeled_states


@settings(max_examples=60, deadline=None)
@given(labeled_states(6))
def test_tableau_matches_dense_state(s):
    t = tableau_from_graph(s.graph, s.labels)
    t.check_invariants()
    psi = labeled_state(s)
    assert phase_aligned_distance(DenseState(to_dense(t)), psi) < 1e-10


def test_zero_state():
    t = StabilizerTableau.zero_state(3)
    assert [str(p) for p in t.stabilizers()] == ["+ZII", "+IZI", "+IIZ"]
    assert t.measure_qubit(1, "Z")[0] == 0


def test_ring5_stabilizer_is_deterministic(ring5):
    t = tableau_from_graph(ring5)
    k1 = graph_stabilizers(ring5)[1]
    assert t.measure(k1) == (0, False)


def test_ring5_local_readout_of_second_label(ring5, rng):
    for _ in range(20):
        t = tableau_from_graph(ring5, LabelVector.encoded([0, 1, 0, 0, 0]))
        out = measure_many(t, [(0, "Z"), (1, "X"), (2, "Z")], rng)
        assert out[0] ^ out[1] ^ out[2] == 1


def test_functional_measure_leaves_input(ring5, rng):
    t = tableau_from_graph(ring5)
    before = [str(p) for p in t.stabilizers()]
    tableau_measure(t, PauliOperator.from_string("ZIIII"), rng)
    assert [str(p) for p in t.stabilizers()] == before


def test_random_outcome_needs_rng(ring5):
    t = tableau_from_graph(ring5)
    with pytest.raises(DomainError):
        t.measure(PauliOperator.from_string("ZIIII"))


def test_non_hermitian_rejected(ring5):
    with pytest.raises(DomainError):
        tableau_from_graph(ring5).measure(PauliOperator.from_string("iZIIII"))


def test_bad_qubit(ring5):
    with pytest.raises(DomainError):
        tableau_from_graph(ring5).measure_qubit(5, "Z")


def test_dense_cap():
    with pytest.raises(ResourceError):
        to_dense(tableau_from_graph(build_nghzm(13)))


def test_large_graph_uses_several_words(rng):
    g = build_nghzm(150)
    t = tableau_from_graph(g, LabelVector.encoded([1] + [0] * 149))
    bits = measure_many(t, [(0, "X")] + [(v, "Z") for v in range(1, 150)], rng)
    assert sum(bits.values()) % 2 == 1


@pytest.mark.parametrize(
    "graph, labels, basis",
    [
        (Graph.from_edges(3, [(0, 1), (1, 2)]), (0, 1, 1), "XZY"),
        (Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [1]), (1, 0, 0, 1), "YYXZ"),
        (Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (3, 4)], [0, 4]), (0, 0, 1, 0, 1), "XZYXY"),
        (Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 3)]), (1, 0, 1, 0, 1, 0), "YXYZXY"),
    ],
)
def test_sampling_agrees_with_born_rule(graph, labels, basis):
    """Joint outcome frequencies from the tableau against dense Born probabilities, 3 sigma."""
    s = LabeledGraphState(graph, LabelVector.encoded(labels))
    psi = labeled_state(s).tensor()
    from graphqss.dense import BASIS_VECTORS

    probs = np.zeros(1 << graph.n)
    for idx in range(1 << graph.n):
        amp = psi
        for v in range(graph.n):
            b = (idx >> (graph.n - 1 - v)) & 1
            amp = np.tensordot(BASIS_VECTORS[basis[v]][b].conj(), amp, axes=(0, 0))
        probs[idx] = abs(complex(amp)) ** 2
    shots = 10_000
    rng = np.random.default_rng(7)
    template = tableau_from_graph(graph, s.labels)
    counts = np.zeros(1 << graph.n)
    for _ in range(shots):
        t = template.copy()
        out = measure_many(t, list(enumerate(basis)), rng)
        counts[sum(out[v] << (graph.n - 1 - v) for v in range(graph.n))] += 1
    sigma = np.sqrt(shots * probs * (1 - probs))
    assert np.all(np.abs(counts - shots * probs) <= 3 * sigma + 1e-9)
