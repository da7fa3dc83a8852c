"""Word arithmetic against a naive list-stack oracle, plus sampler statistics."""

import numpy as np
import pytest
import scipy.stats

from aaglab.words import (
    IDENTITY,
    Word,
    ball_size,
    ball_word,
    format_word,
    make_rng,
    parse_word,
    random_tuple,
    sphere_size,
    sphere_word,
    word,
    words_to_flat,
)

import _brute as B

P = parse_word


# ---------------------------------------------------------------------------
# construction and representation


def test_construction_reduces():
    assert word(1, -1, 2).letters == (2,)
    assert word(1, 2, -2, -1).is_identity
    assert word().letters == ()
    assert Word([1, 2, 3]).letters == (1, 2, 3)


def test_zero_letter_rejected():
    with pytest.raises(ValueError):
        Word([1, 0, 2])


def test_identity_singleton_behaviour():
    assert IDENTITY.is_identity
    assert len(IDENTITY) == 0
    assert IDENTITY == word()
    assert IDENTITY.inverse() == IDENTITY


def test_parse_format_roundtrip():
    assert P("aBa").letters == (1, -2, 1)
    assert P("").is_identity
    assert P("  ab  ").letters == (1, 2)
    assert format_word(P("aBa")) == "aBa"
    assert format_word(IDENTITY) == "1"
    # numeric mode for large alphabets
    assert P("27 -3 27").letters == (27, -3, 27)
    assert format_word(word(27, -3)) == "27 -3"
    with pytest.raises(ValueError):
        P("a?b")


def test_array_is_readonly():
    w = P("ab")
    with pytest.raises(ValueError):
        w.array[0] = 5
    assert w.letters == (1, 2)


def test_eq_hash():
    assert P("ab") == word(1, 2)
    assert P("ab") != P("ba")
    assert hash(P("ab")) == hash(word(1, 2, -2, 2))
    d = {P("ab"): 1}
    assert d[word(1, 2)] == 1


# ---------------------------------------------------------------------------
# arithmetic, frozen cases


def test_multiply_frozen():
    assert (P("ab") * P("Ba")).letters == (1, 1)
    assert (P("ab") * P("BA")).is_identity
    assert (P("a") * P("b")).letters == (1, 2)
    assert (P("ab") * IDENTITY) == P("ab")


def test_inverse_frozen():
    assert P("ab").inverse() == P("BA")
    assert (~P("aBa")).letters == (-1, 2, -1)


def test_pow_frozen():
    assert (P("ab") ** 3).letters == (1, 2, 1, 2, 1, 2)
    assert (P("ab") ** 0).is_identity
    assert (P("ab") ** -2) == (P("BA") ** 2)
    # conjugate powers stay reduced: (a b a^-1)^3 = a b^3 a^-1
    assert (P("abA") ** 3).letters == (1, 2, 2, 2, -1)


def test_conjugated_by_frozen():
    assert P("b").conjugated_by(P("a")).letters == (-1, 2, 1)
    assert P("a").conjugated_by(P("a")) == P("a")
    assert P("b").conjugated_by(IDENTITY) == P("b")


def test_cyclic_split_frozen():
    pre, core = P("BabAb").cyclic_split()
    assert pre.letters == (-2, 1) and core.letters == (2,)
    assert pre * core * pre.inverse() == P("BabAb")
    assert P("ab").cyclic_split() == (IDENTITY, P("ab"))
    assert IDENTITY.cyclic_core() == IDENTITY
    assert P("aBA").cyclic_core().letters == (-2,)


def test_cancellation_with_frozen():
    assert P("ab").cancellation_with(P("Ba")) == 1
    assert P("ab").cancellation_with(P("BA")) == 2
    assert P("a").cancellation_with(P("b")) == 0
    assert P("ab").cancellation_with(IDENTITY) == 0


# ---------------------------------------------------------------------------
# oracle agreement and algebraic laws


def test_reduction_matches_stack_oracle(rng):
    for _ in range(2000):
        n = int(rng.integers(0, 30))
        raw = [int(x) for x in rng.integers(1, 4, size=n)]
        raw = [x if rng.integers(2) else -x for x in raw]
        assert Word(raw).letters == B.reduce_letters(raw)


def test_group_axioms_bulk(rng):
    for _ in range(10_000):
        u = sphere_word(rng, 3, int(rng.integers(0, 9)))
        v = sphere_word(rng, 3, int(rng.integers(0, 9)))
        w = sphere_word(rng, 3, int(rng.integers(0, 9)))
        assert (u * v) * w == u * (v * w)
        assert u * u.inverse() == IDENTITY
        assert u * IDENTITY == u and IDENTITY * u == u
        assert (u * v).inverse() == v.inverse() * u.inverse()
        assert u.conjugated_by(v * w) == u.conjugated_by(v).conjugated_by(w)


def test_pow_matches_repeated_multiplication(rng):
    for _ in range(500):
        u = sphere_word(rng, 2, int(rng.integers(0, 7)))
        for n in range(-4, 5):
            acc = IDENTITY
            step = u if n >= 0 else u.inverse()
            for _ in range(abs(n)):
                acc = acc * step
            assert u ** n == acc


def test_multiplication_length_bound(rng):
    for _ in range(2000):
        u = sphere_word(rng, 2, int(rng.integers(0, 12)))
        v = sphere_word(rng, 2, int(rng.integers(0, 12)))
        c = u.cancellation_with(v)
        assert len(u * v) == len(u) + len(v) - 2 * c
        assert 0 <= c <= min(len(u), len(v))


# ---------------------------------------------------------------------------
# counting and sampling


def test_counting_frozen():
    assert sphere_size(2, 0) == 1
    assert sphere_size(2, 1) == 4
    assert sphere_size(2, 3) == 36
    assert sphere_size(3, 2) == 30
    assert ball_size(2, 5) == 485
    assert ball_size(2, 0) == 1


def test_counting_matches_enumeration():
    for rank in (1, 2, 3):
        for radius in range(0, 5):
            words = B.ball(rank, radius)
            assert ball_size(rank, radius) == len(words)
            per_len = {}
            for w in words:
                per_len[len(w)] = per_len.get(len(w), 0) + 1
            for ln, cnt in per_len.items():
                assert sphere_size(rank, ln) == cnt


def test_sphere_word_shape(rng):
    for _ in range(2000):
        ln = int(rng.integers(0, 15))
        w = sphere_word(rng, 3, ln)
        assert len(w) == ln
        assert w.max_generator() <= 3
        assert B.reduce_letters(w.letters) == w.letters


def test_sphere_word_uniform_length_one():
    rng = make_rng(7, 1)
    counts = {}
    n = 100_000
    for _ in range(n):
        w = sphere_word(rng, 2, 1)
        counts[w.letters] = counts.get(w.letters, 0) + 1
    assert set(counts) == {(1,), (-1,), (2,), (-2,)}
    for c in counts.values():
        assert abs(c / n - 0.25) < 0.01


def test_sphere_word_uniform_length_three():
    rng = make_rng(7, 3)
    counts = {}
    n = 100_000
    for _ in range(n):
        w = sphere_word(rng, 2, 3)
        counts[w.letters] = counts.get(w.letters, 0) + 1
    assert len(counts) == 36
    for c in counts.values():
        assert abs(c / n - 1 / 36) < 0.01


def test_sphere_word_chi_square_length_five():
    # all 324 reduced words of length 5 over rank 2, fixed seed
    rng = make_rng(7, 5)
    n = 300_000
    counts = {w: 0 for w in B.ball(2, 5) if len(w) == 5}
    assert len(counts) == 324
    for _ in range(n):
        counts[sphere_word(rng, 2, 5).letters] += 1
    stat, p = scipy.stats.chisquare(list(counts.values()))
    assert p > 1e-3


def test_ball_word_distribution():
    rng = make_rng(7, 9)
    n = 100_000
    length_counts = {}
    for _ in range(n):
        w = ball_word(rng, 2, 3)
        assert len(w) <= 3
        length_counts[len(w)] = length_counts.get(len(w), 0) + 1
    total = ball_size(2, 3)
    for ln in range(4):
        expect = sphere_size(2, ln) / total
        assert abs(length_counts.get(ln, 0) / n - expect) < 0.01


def test_random_tuple_modes(rng):
    t = random_tuple(rng, 2, 3, 5)
    assert len(t) == 3 and all(len(w) == 5 for w in t)
    t = random_tuple(rng, 2, (2, 4), (4, 6))
    assert 2 <= len(t) <= 4 and all(4 <= len(w) <= 6 for w in t)
    t = random_tuple(rng, 2, 2, (4, 6), mode="ball")
    assert all(len(w) <= 6 for w in t)
    with pytest.raises(ValueError):
        random_tuple(rng, 2, 2, 5, mode="nope")


def test_random_tuple_length_distribution():
    rng = make_rng(11)
    counts = {4: 0, 5: 0, 6: 0}
    n = 30_000
    for _ in range(n):
        for w in random_tuple(rng, 2, 2, (4, 6)):
            counts[len(w)] += 1
    for ln in (4, 5, 6):
        assert abs(counts[ln] / (2 * n) - 1 / 3) < 0.02


def test_make_rng_deterministic():
    a = [make_rng(3, 1, 4).integers(1 << 30) for _ in range(4)]
    b = [make_rng(3, 1, 4).integers(1 << 30) for _ in range(4)]
    assert a == b
    assert make_rng(3, 1, 4).integers(1 << 30) != make_rng(3, 1, 5).integers(
        1 << 30
    )


def test_sampler_determinism_across_calls():
    ws1 = [sphere_word(make_rng(5, i), 2, 8) for i in range(20)]
    ws2 = [sphere_word(make_rng(5, i), 2, 8) for i in range(20)]
    assert ws1 == ws2


def test_words_to_flat_roundtrip(rng):
    ws = [sphere_word(rng, 2, int(rng.integers(0, 8))) for _ in range(10)]
    flat, offs = words_to_flat(ws)
    assert offs[0] == 0 and offs[-1] == flat.size
    for i, w in enumerate(ws):
        assert tuple(int(x) for x in flat[offs[i] : offs[i + 1]]) == w.letters
