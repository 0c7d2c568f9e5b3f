from __future__ import annotations

import itertools

import numpy as np
import pytest

from graphqss import gf2
from graphqss.errors import DomainError, UnsupportedError
from graphqss.protocols.cq import (
    EveModel,
    check_assignment,
    cq_menu,
    cq_run,
    cq_security_witness,
    eve_intercept_resend,
    nn_parity_rule,
)
from graphqss.schemes import build_ghz_tree, nn_scheme, ring4_scheme, ring5_scheme, tree_scheme
from graphqss.graph_core import Graph
from graphqss.tableau import tableau_from_graph


@pytest.fixture(scope="module")
def tree_spec():
    return tree_scheme(build_ghz_tree(3, {1: [0]}, Graph.from_edges(1, [])), 3)


def test_ring5_three_neighbour_menu():
    menu = cq_menu(ring5_scheme(), [0, 1, 2])
    assert menu.patterns == ({0: "Z", 1: "X", 2: "Z"}, {0: "X", 1: "Y", 2: "X"})


def test_star_menu():
    menu = cq_menu(nn_scheme(4))
    assert menu.vertex_menu(0) == ("X", "Y")
    assert menu.vertex_menu(2) == ("Z", "Y")


def test_ring4_rejected():
    with pytest.raises(UnsupportedError):
        cq_menu(ring4_scheme())
    with pytest.raises(UnsupportedError):
        cq_run(ring4_scheme(), 10)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_sifting_predicate_matches_star_parity_rule(n):
    spec = nn_scheme(n)
    g = spec.dealer_graph()
    menu = cq_menu(spec)
    choices = [menu.vertex_menu(v) for v in spec.players]
    for letters in itertools.product(*choices):
        for d in "ZY":
            assign = dict(enumerate(letters))
            assign[spec.dealer] = d
            assert check_assignment(g, assign)[0] == nn_parity_rule(assign, spec.dealer)


def test_clean_run_matches_and_accepts():
    tr = cq_run(nn_scheme(4), 2000, seed=3)
    assert tr.verdict == "accept" and tr.qber == 0.0
    assert abs(tr.sift_rate - 0.5) < 3 * np.sqrt(0.25 / 2000)
    assert tr.key == tr.players_key
    assert all(tr.rounds[i].dealer_bit == tr.rounds[i].players_bit for i in tr.sifted)


def test_ring5_matched_rounds_correlated():
    tr = cq_run(ring5_scheme(), 1000, seed=1, subset=[0, 1, 2])
    assert tr.verdict == "accept"
    assert all(tr.rounds[i].dealer_bit == tr.rounds[i].players_bit for i in tr.sifted)
    # rounds with the other dealer basis carry no correlation
    mean, count = tr.mismatched_correlation()
    assert count > 300 and abs(mean) < 0.15


def test_eve_on_small_star_is_detected():
    tr = cq_run(nn_scheme(3), 2000, EveModel("intercept-resend", (0, 1, 2)), seed=5)
    assert tr.qber > 0 and tr.verdict == "abort"


def test_no_attacked_channels_changes_nothing():
    clean = cq_run(nn_scheme(3), 300, seed=9)
    idle = cq_run(nn_scheme(3), 300, EveModel("intercept-resend", ()), seed=9)
    a, b = clean.to_json(), idle.to_json()
    a.pop("eve"), b.pop("eve")
    assert a == b


def test_eve_leaves_tableau_alone_when_inactive(rng):
    t = tableau_from_graph(nn_scheme(3).dealer_graph())
    assert eve_intercept_resend(t, EveModel(), cq_menu(nn_scheme(3)), rng) == {}


def test_same_seed_same_transcript_any_worker_count():
    spec = ring5_scheme()
    eve = EveModel("intercept-resend", (0, 1, 2, 3, 4))
    a = cq_run(spec, 400, eve, seed=11)
    b = cq_run(spec, 400, eve, seed=11, workers=2)
    assert a.to_json() == b.to_json()
    assert cq_run(spec, 400, eve, seed=12).to_json() != a.to_json()


@pytest.mark.parametrize("f", [0.0, 1.0, -0.1, 2])
def test_check_fraction_validated(f):
    with pytest.raises(DomainError):
        cq_run(nn_scheme(3), 10, check_fraction=f)


def test_bad_eve_strategy():
    with pytest.raises(DomainError):
        EveModel("photon-splitting", (0,))


def test_witness_star_certifies_whole_state():
    tr = cq_run(nn_scheme(4), 2000, seed=2)
    w = cq_security_witness(nn_scheme(4), tr)
    assert w.conclusion == "full-state" and w.rank == 5


def test_witness_ring5_subset():
    spec = ring5_scheme()
    tr = cq_run(spec, 1000, seed=2, subset=[0, 1, 2])
    w = cq_security_witness(spec, tr)
    assert gf2.same_span(w.certified, [gf2.mask_of([1]), gf2.mask_of([0, 1, 2, 5])])
    assert w.conclusion == "secure-subspace"


def test_witness_tree(tree_spec):
    tr = cq_run(tree_spec, 1000, seed=2)
    w = cq_security_witness(tree_spec, tr)
    d = tree_spec.dealer
    assert gf2.same_span(w.certified, [gf2.mask_of([0]), gf2.mask_of([0, d])])


def test_witness_needs_accept():
    tr = cq_run(nn_scheme(3), 2000, EveModel("intercept-resend", (0, 1, 2)), seed=5)
    with pytest.raises(DomainError):
        cq_security_witness(nn_scheme(3), tr)


def test_star_needs_every_player():
    with pytest.raises(DomainError):
        cq_menu(nn_scheme(4), [0, 1, 2])
