"""Graph groups: normal forms, triviality, projections onto rank-2 quotients.

Triviality is cross-checked against a breadth-first rewriting oracle that only
uses length-non-increasing moves, which is complete for identity testing.
"""

import pytest

from aaglab.errors import GraphComplete
from aaglab.raag import (
    CommutationGraph,
    choose_projection,
    equal_in_group,
    geodesic_length,
    is_trivial,
    msp_heuristic,
    normal_form,
    project,
)
from aaglab.subgroups import evaluate_expression
from aaglab.words import IDENTITY, Word, parse_word, sphere_word, word

import _brute as B

P = parse_word

PATH3 = CommutationGraph.path(3)
FREE2 = CommutationGraph.empty(2)
FULL3 = CommutationGraph.complete(3)


def _random_graph(rng, n):
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    edges = [e for e in pairs if rng.integers(2)]
    return CommutationGraph(n, edges)


def _random_word(rng, n, max_len):
    return Word(
        int(x)
        for x in rng.choice(
            [s * g for g in range(1, n + 1) for s in (1, -1)],
            size=int(rng.integers(0, max_len + 1)),
        )
    )


# ---------------------------------------------------------------------------
# graphs


def test_graph_constructors():
    assert PATH3.edge_list() == [(1, 2), (2, 3)]
    assert FREE2.edge_list() == []
    assert FULL3.edge_list() == [(1, 2), (1, 3), (2, 3)]
    assert PATH3.commutes(1, 2) and PATH3.commutes(2, 3)
    assert not PATH3.commutes(1, 3)


def test_graph_validation():
    with pytest.raises(ValueError):
        CommutationGraph(2, [(1, 1)])
    with pytest.raises(ValueError):
        CommutationGraph(2, [(0, 1)])
    with pytest.raises(ValueError):
        CommutationGraph(2, [(1, 3)])


# ---------------------------------------------------------------------------
# normal forms


def test_normal_form_frozen():
    assert normal_form(PATH3, word(1, 2, -1)).letters == (2,)
    assert normal_form(PATH3, word(2, 1)).letters == (1, 2)
    assert normal_form(FREE2, word(2, 1)).letters == (2, 1)
    assert normal_form(FULL3, word(3, 1, 2)).letters == (1, 2, 3)
    assert normal_form(PATH3, IDENTITY) == IDENTITY


def test_normal_form_idempotent(rng):
    for _ in range(500):
        g = _random_graph(rng, 4)
        w = _random_word(rng, 4, 10)
        nf = normal_form(g, w)
        assert normal_form(g, nf) == nf
        assert geodesic_length(g, w) == len(nf)


def test_normal_form_respects_group_equality(rng):
    # padding a word with a trivial factor never changes its normal form
    for _ in range(300):
        n = int(rng.integers(2, 5))
        g = _random_graph(rng, n)
        w = _random_word(rng, n, 8)
        t = B.shuffled_trivial_raag_word(rng, n, g.edge_list(), int(rng.integers(1, 4)))
        padded = Word(w.letters + t if rng.integers(2) else t + w.letters)
        assert normal_form(g, padded) == normal_form(g, w)


def test_normal_form_free_graph_is_free_reduction(rng):
    for _ in range(300):
        w = _random_word(rng, 3, 12)
        assert normal_form(CommutationGraph.empty(3), w) == w


# ---------------------------------------------------------------------------
# triviality and equality


def test_is_trivial_frozen():
    assert is_trivial(PATH3, word(1, 2, -1, -2))
    assert not is_trivial(PATH3, word(1, 3, -1, -3))
    assert is_trivial(PATH3, IDENTITY)
    assert not is_trivial(PATH3, word(2))
    assert is_trivial(FULL3, word(1, 2, 3, -1, -2, -3))


def test_is_trivial_matches_bfs_oracle(rng):
    for _ in range(300):
        n = int(rng.integers(1, 5))
        g = _random_graph(rng, n)
        if rng.integers(2):
            w = B.shuffled_trivial_raag_word(rng, n, g.edge_list(), int(rng.integers(0, 5)))
            w = Word(w)
        else:
            w = _random_word(rng, n, 10)
        assert is_trivial(g, w) == B.raag_trivial_bfs(n, g.edge_list(), w.letters)


def test_equal_in_group(rng):
    assert equal_in_group(PATH3, word(1, 2), word(2, 1))
    assert not equal_in_group(PATH3, word(1, 3), word(3, 1))
    for _ in range(200):
        g = _random_graph(rng, 3)
        u = _random_word(rng, 3, 8)
        v = _random_word(rng, 3, 8)
        assert equal_in_group(g, u, v) == is_trivial(g, u * v.inverse())
        assert equal_in_group(g, u, normal_form(g, u))


# ---------------------------------------------------------------------------
# projections


def test_choose_projection_frozen():
    assert choose_projection(PATH3) == (1, 3)
    assert choose_projection(CommutationGraph.empty(2)) == (1, 2)
    assert choose_projection(CommutationGraph.path(4)) == (1, 3)
    with pytest.raises(GraphComplete):
        choose_projection(FULL3)
    with pytest.raises(GraphComplete):
        choose_projection(CommutationGraph.complete(1))


def test_project_frozen():
    assert project(PATH3, word(1, 2, 3), 1, 3).letters == (1, 2)
    assert project(PATH3, word(2), 1, 3) == IDENTITY
    assert project(PATH3, word(3, -1), 1, 3).letters == (2, -1)
    assert project(PATH3, word(1, 2, -1, -2), 1, 3) == IDENTITY


def test_project_is_homomorphism(rng):
    for _ in range(300):
        g = _random_graph(rng, 4)
        try:
            p, q = choose_projection(g)
        except GraphComplete:
            continue
        u = _random_word(rng, 4, 8)
        v = _random_word(rng, 4, 8)
        assert project(g, u * v, p, q) == project(g, u, p, q) * project(g, v, p, q)
        assert project(g, u.inverse(), p, q) == project(g, u, p, q).inverse()


def test_project_kills_defining_relators(rng):
    for _ in range(200):
        g = _random_graph(rng, 4)
        try:
            p, q = choose_projection(g)
        except GraphComplete:
            continue
        for i, j in g.edge_list():
            relator = word(i, j, -i, -j)
            assert project(g, relator, p, q) == IDENTITY


def test_projection_pair_stays_free(rng):
    # the two kept letters map to the standard rank-2 generators
    g = CommutationGraph.path(4)
    p, q = choose_projection(g)
    assert project(g, word(p), p, q).letters == (1,)
    assert project(g, word(q), p, q).letters == (2,)


# ---------------------------------------------------------------------------
# membership search heuristic


def test_msp_frozen():
    got = msp_heuristic(PATH3, (word(1, 2), word(3)), word(1, 2, 3))
    assert got is not None and got.letters == (1, 2)
    assert msp_heuristic(PATH3, (word(1), word(3)), word(2)) is None
    got = msp_heuristic(PATH3, (word(1),), word(1, 1, 1))
    assert got is not None and got.letters == (1, 1, 1)


def test_msp_sound(rng):
    # whatever it returns must evaluate to the target in the group
    for _ in range(300):
        g = _random_graph(rng, 4)
        try:
            choose_projection(g)
        except GraphComplete:
            continue
        gens = tuple(_random_word(rng, 4, 4) for _ in range(int(rng.integers(1, 4))))
        target = _random_word(rng, 4, 6)
        got = msp_heuristic(g, gens, target)
        if got is not None:
            assert equal_in_group(g, evaluate_expression(got, gens), target)


def test_msp_finds_planted_products(rng):
    # generic planted instances on the path graph succeed almost always
    hits = 0
    trials = 200
    for _ in range(trials):
        gens = tuple(
            normal_form(PATH3, _random_word(rng, 3, 20)) for _ in range(2)
        )
        expr = Word(
            int(s * (i + 1))
            for i, s in zip(rng.integers(0, 2, size=6), rng.choice([-1, 1], size=6))
        )
        target = evaluate_expression(expr, gens)
        got = msp_heuristic(PATH3, gens, target)
        if got is not None:
            assert equal_in_group(PATH3, evaluate_expression(got, gens), target)
            hits += 1
    assert hits >= 0.9 * trials
