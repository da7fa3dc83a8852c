"""Commutator key exchange: keygen, published conjugates, shared-key algebra."""

import pytest

from aaglab.aag import (
    AagParams,
    FreePlatform,
    RaagPlatform,
    aag_to_scsp,
    commutator,
    conjugacy_system,
    evaluate_factors,
    keygen,
    recover_key,
    shared_key_alice,
    shared_key_bob,
)
from aaglab.errors import AlphabetMismatch
from aaglab.raag import CommutationGraph, equal_in_group
from aaglab.words import IDENTITY, make_rng, parse_word

P = parse_word

PLATFORMS = [
    FreePlatform(2),
    RaagPlatform(CommutationGraph.path(3)),
]


# ---------------------------------------------------------------------------
# parameters and platforms


def test_params_defaults():
    p = AagParams()
    assert p.alice_count == (3, 5)
    assert p.key_factors == (5, 10)


def test_params_scalar_coercion():
    p = AagParams(alice_count=4, bob_length=7)
    assert p.alice_count == (4, 4)
    assert p.bob_length == (7, 7)


def test_params_validation():
    with pytest.raises(ValueError):
        AagParams(alice_count=(5, 3))
    with pytest.raises(ValueError):
        AagParams(alice_count=0)
    with pytest.raises(ValueError):
        AagParams(key_factors=(0, 3))


def test_platform_labels():
    assert FreePlatform(2).label() == "free:2"
    assert FreePlatform(4).label() == "free:4"
    assert RaagPlatform(CommutationGraph.path(3)).label() == "raag:3:1-2.2-3"
    assert RaagPlatform(CommutationGraph.empty(2)).label() == "raag:2:"


def test_platform_validation():
    with pytest.raises(ValueError):
        FreePlatform(1)
    with pytest.raises(AlphabetMismatch):
        FreePlatform(2).normalize(P("c"))


def test_raag_platform_normalize():
    rp = RaagPlatform(CommutationGraph.path(3))
    assert rp.rank == 3
    assert rp.normalize(P("ba")).letters == (1, 2)
    assert rp.is_trivial(P("abAB"))


# ---------------------------------------------------------------------------
# factor evaluation and commutators


def test_evaluate_factors_frozen():
    assert evaluate_factors((P("ab"), P("ba")), (1, -2)).letters == (1, 2, -1, -2)
    assert evaluate_factors((P("a"),), ()) == IDENTITY
    assert evaluate_factors((P("a"), P("b")), (2, 2, -1)).letters == (2, 2, -1)


def test_evaluate_factors_validation():
    with pytest.raises(ValueError):
        evaluate_factors((P("a"),), (0,))
    with pytest.raises(ValueError):
        evaluate_factors((P("a"),), (2,))


def test_commutator_frozen():
    assert commutator(P("a"), P("b")).letters == (-1, -2, 1, 2)
    assert commutator(P("a"), P("a")) == IDENTITY
    assert commutator(P("a"), P("aa")) == IDENTITY
    u, v = P("ab"), P("bA")
    assert commutator(u, v) == u.inverse() * v.inverse() * u * v


# ---------------------------------------------------------------------------
# keygen


@pytest.mark.parametrize("platform", PLATFORMS, ids=lambda p: p.label())
def test_keygen_shapes(platform):
    params = AagParams()
    inst, alice, bob = keygen(platform, params, make_rng(101), seed=101)
    assert 3 <= len(inst.alice_gens) <= 5
    assert 3 <= len(inst.bob_gens) <= 5
    assert len(inst.alice_conjugates) == len(inst.bob_gens)
    assert len(inst.bob_conjugates) == len(inst.alice_gens)
    assert inst.seed == 101
    assert inst.params == params
    assert 5 <= len(alice.factors) <= 10
    assert 5 <= len(bob.factors) <= 10
    assert all(1 <= abs(f) <= len(inst.alice_gens) for f in alice.factors)
    assert all(1 <= abs(f) <= len(inst.bob_gens) for f in bob.factors)
    assert alice.side == "alice" and bob.side == "bob"


@pytest.mark.parametrize("platform", PLATFORMS, ids=lambda p: p.label())
def test_keygen_key_consistency(platform):
    inst, alice, bob = keygen(platform, AagParams(), make_rng(7))
    assert alice.key == platform.normalize(
        evaluate_factors(inst.alice_gens, alice.factors)
    )
    assert bob.key == platform.normalize(
        evaluate_factors(inst.bob_gens, bob.factors)
    )


@pytest.mark.parametrize("platform", PLATFORMS, ids=lambda p: p.label())
def test_keygen_deterministic(platform):
    a = keygen(platform, AagParams(), make_rng(55), seed=55)
    b = keygen(platform, AagParams(), make_rng(55), seed=55)
    assert a == b
    c = keygen(platform, AagParams(), make_rng(56), seed=56)
    assert a != c


@pytest.mark.parametrize("platform", PLATFORMS, ids=lambda p: p.label())
def test_published_conjugates_orientation(platform):
    inst, alice, bob = keygen(platform, AagParams(), make_rng(9))
    for g, c in zip(inst.bob_gens, inst.alice_conjugates):
        assert c == platform.normalize(g.conjugated_by(alice.key))
    for g, c in zip(inst.alice_gens, inst.bob_conjugates):
        assert c == platform.normalize(g.conjugated_by(bob.key))


# ---------------------------------------------------------------------------
# the shared key


@pytest.mark.parametrize("platform", PLATFORMS, ids=lambda p: p.label())
@pytest.mark.parametrize("seed", range(20))
def test_key_agreement(platform, seed):
    inst, alice, bob = keygen(platform, AagParams(), make_rng(1000, seed))
    ka = shared_key_alice(inst, alice)
    kb = shared_key_bob(inst, bob)
    assert ka == kb
    assert ka == platform.normalize(commutator(alice.key, bob.key))


def test_shared_key_free_platform_explicit():
    # alice multiplies her factor word over bob's published conjugates,
    # which telescopes to a^-1 * b^-1 * a * b
    inst, alice, bob = keygen(FreePlatform(2), AagParams(), make_rng(31))
    lifted = evaluate_factors(inst.bob_conjugates, alice.factors)
    assert lifted == alice.key.conjugated_by(bob.key)
    assert alice.key.inverse() * lifted == commutator(alice.key, bob.key)


# ---------------------------------------------------------------------------
# attack-facing views


@pytest.mark.parametrize("platform", PLATFORMS, ids=lambda p: p.label())
def test_conjugacy_system_solved_by_true_keys(platform):
    inst, alice, bob = keygen(platform, AagParams(), make_rng(77))
    pairs_a, gens_a = conjugacy_system(inst, "alice")
    assert gens_a == inst.alice_gens
    assert len(pairs_a) == len(inst.bob_gens)
    for u, v in pairs_a:
        if platform.kind == "free":
            assert u.conjugated_by(alice.key) == v
        else:
            assert equal_in_group(
                platform.graph, u.conjugated_by(alice.key), v
            )
    pairs_b, gens_b = conjugacy_system(inst, "bob")
    assert gens_b == inst.bob_gens
    for u, v in pairs_b:
        if platform.kind == "free":
            assert u.conjugated_by(bob.key) == v


def test_conjugacy_system_rejects_unknown_side():
    inst, _, _ = keygen(FreePlatform(2), AagParams(), make_rng(1))
    with pytest.raises(ValueError):
        conjugacy_system(inst, "carol")


def test_aag_to_scsp_covers_both_sides():
    inst, alice, bob = keygen(FreePlatform(2), AagParams(), make_rng(13))
    (pa, ga), (pb, gb) = aag_to_scsp(inst)
    assert (pa, ga) == conjugacy_system(inst, "alice")
    assert (pb, gb) == conjugacy_system(inst, "bob")


@pytest.mark.parametrize("platform", PLATFORMS, ids=lambda p: p.label())
def test_recover_key_with_true_keys(platform):
    inst, alice, bob = keygen(platform, AagParams(), make_rng(99))
    assert recover_key(inst, alice.key, bob.key) == shared_key_alice(inst, alice)


def test_recover_key_with_equivalent_solutions():
    # any solutions of the two systems, not just the true keys, reproduce
    # the shared key; offset by a central element of the relevant kind
    inst, alice, bob = keygen(FreePlatform(2), AagParams(), make_rng(23))
    from aaglab.conjugacy import solve_system_in_subgroup
    from aaglab.subgroups import SubgroupGraph

    pairs_a, gens_a = conjugacy_system(inst, "alice")
    pairs_b, gens_b = conjugacy_system(inst, "bob")
    sol_a = solve_system_in_subgroup(pairs_a, SubgroupGraph(2, gens_a))
    sol_b = solve_system_in_subgroup(pairs_b, SubgroupGraph(2, gens_b))
    assert sol_a is not None and sol_b is not None
    assert recover_key(inst, sol_a[0], sol_b[0]) == shared_key_alice(inst, alice)
