"""Commutator key exchange over group platforms.

Two parties publish generating tuples; each picks a private product of its
own tuple and publishes the other party's tuple conjugated by that key.
Both sides then derive the commutator of the two keys. The platform is
either a free group or a right-angled Artin group; the only platform
operations needed are multiplication and a normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernels as K
from . import raag as R
from .errors import AlphabetMismatch
from .words import IDENTITY, Word

__all__ = [
    "FreePlatform",
    "RaagPlatform",
    "Platform",
    "AagParams",
    "AagPrivate",
    "AagInstance",
    "keygen",
    "evaluate_factors",
    "shared_key_alice",
    "shared_key_bob",
    "aag_to_scsp",
    "conjugacy_system",
    "commutator",
    "recover_key",
]


class FreePlatform:
    """Free group of a given rank; words are their own normal forms."""

    kind = "free"

    def __init__(self, rank: int):
        if rank < 2:
            raise ValueError("free platform needs rank >= 2")
        self.rank = rank

    def normalize(self, w: Word) -> Word:
        if w.max_generator() > self.rank:
            raise AlphabetMismatch(
                f"letter {w.max_generator()} outside platform rank {self.rank}"
            )
        return w

    def is_trivial(self, w: Word) -> bool:
        return len(self.normalize(w)) == 0

    def label(self) -> str:
        return f"free:{self.rank}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreePlatform) and other.rank == self.rank

    def __hash__(self) -> int:
        return hash(("free", self.rank))

    def __repr__(self) -> str:
        return f"FreePlatform(rank={self.rank})"


class RaagPlatform:
    """Right-angled Artin group over a commutation graph."""

    kind = "raag"

    def __init__(self, graph: R.CommutationGraph):
        self.graph = graph
        self.rank = graph.n

    def normalize(self, w: Word) -> Word:
        return R.normal_form(self.graph, w)

    def is_trivial(self, w: Word) -> bool:
        return R.is_trivial(self.graph, w)

    def label(self) -> str:
        # dot-joined so the label stays a single CSV field and shell token
        edges = ".".join(f"{u}-{v}" for u, v in self.graph.edge_list())
        return f"raag:{self.rank}:{edges}"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RaagPlatform) and other.graph == self.graph

    def __hash__(self) -> int:
        return hash(("raag", self.graph))

    def __repr__(self) -> str:
        return f"RaagPlatform({self.graph!r})"


Platform = Union[FreePlatform, RaagPlatform]


def _as_range(v) -> tuple[int, int]:
    if isinstance(v, (int, np.integer)):
        v = (int(v), int(v))
    lo, hi = int(v[0]), int(v[1])
    if not (1 <= lo <= hi):
        raise ValueError(f"bad range {v!r}")
    return lo, hi


@dataclass(frozen=True)
class AagParams:
    """Instance sizes; each field is an inclusive [lo, hi] range."""

    alice_count: tuple[int, int] = (3, 5)
    alice_length: tuple[int, int] = (5, 10)
    bob_count: tuple[int, int] = (3, 5)
    bob_length: tuple[int, int] = (5, 10)
    key_factors: tuple[int, int] = (5, 10)

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            object.__setattr__(self, name, _as_range(getattr(self, name)))


@dataclass(frozen=True)
class AagPrivate:
    """A party's secret: the factor sequence over its public tuple and the
    resulting key. Factors are signed 1-based indices into the tuple."""

    side: str
    factors: tuple[int, ...]
    key: Word


@dataclass(frozen=True)
class AagInstance:
    """Everything an eavesdropper sees.

    Conjugate tuples are named by who published them: alice_conjugates is
    Bob's tuple conjugated by Alice's key (Alice's broadcast), and
    bob_conjugates is Alice's tuple conjugated by Bob's key."""

    platform: Platform
    alice_gens: tuple[Word, ...]
    bob_gens: tuple[Word, ...]
    alice_conjugates: tuple[Word, ...]  # bob_gens[j] conjugated by Alice's key
    bob_conjugates: tuple[Word, ...]  # alice_gens[i] conjugated by Bob's key
    params: Optional[AagParams] = None
    seed: Optional[int] = None


def _sample_gen(platform: Platform, rng, length: tuple[int, int]) -> Word:
    from .words import sphere_word

    while True:
        ell = int(rng.integers(length[0], length[1] + 1))
        w = sphere_word(rng, platform.rank, ell)
        if not platform.is_trivial(w):
            return w


def _sample_factors(rng, count: int, n_factors: tuple[int, int]) -> tuple[int, ...]:
    m = int(rng.integers(n_factors[0], n_factors[1] + 1))
    first = int(rng.integers(0, 2 * count))
    rest = rng.integers(0, 2 * count - 1, size=m - 1).astype(np.int64)
    return tuple(int(x) for x in K.fill_nonbacktracking(count, first, rest))


def evaluate_factors(gens: Sequence[Word], factors: Sequence[int]) -> Word:
    """Multiply out a signed-index factor sequence over a tuple."""
    out = IDENTITY
    for f in factors:
        if not 1 <= abs(f) <= len(gens):
            raise ValueError(f"factor {f} outside 1..{len(gens)}")
        g = gens[abs(f) - 1]
        out = out * (g if f > 0 else g.inverse())
    return out


def keygen(
    platform: Platform, params: AagParams, rng, seed: Optional[int] = None
) -> tuple[AagInstance, AagPrivate, AagPrivate]:
    """Sample a full instance: public tuples, both private keys, and the
    published conjugates. `seed` is carried as instance metadata only; the
    randomness comes from `rng`."""
    na = int(rng.integers(params.alice_count[0], params.alice_count[1] + 1))
    nb = int(rng.integers(params.bob_count[0], params.bob_count[1] + 1))
    alice_gens = tuple(_sample_gen(platform, rng, params.alice_length) for _ in range(na))
    bob_gens = tuple(_sample_gen(platform, rng, params.bob_length) for _ in range(nb))
    fa = _sample_factors(rng, na, params.key_factors)
    fb = _sample_factors(rng, nb, params.key_factors)
    a_key = platform.normalize(evaluate_factors(alice_gens, fa))
    b_key = platform.normalize(evaluate_factors(bob_gens, fb))
    inst = AagInstance(
        platform=platform,
        alice_gens=alice_gens,
        bob_gens=bob_gens,
        alice_conjugates=tuple(
            platform.normalize(g.conjugated_by(a_key)) for g in bob_gens
        ),
        bob_conjugates=tuple(
            platform.normalize(g.conjugated_by(b_key)) for g in alice_gens
        ),
        params=params,
        seed=seed,
    )
    return (
        inst,
        AagPrivate(side="alice", factors=fa, key=a_key),
        AagPrivate(side="bob", factors=fb, key=b_key),
    )


def commutator(u: Word, v: Word) -> Word:
    """u^-1 v^-1 u v (freely reduced; normalize for non-free platforms)."""
    return u.inverse() * v.inverse() * u * v


def shared_key_alice(inst: AagInstance, alice: AagPrivate) -> Word:
    """Alice's derivation: her factor sequence applied to Bob's broadcast,
    premultiplied by her inverse key."""
    lifted = evaluate_factors(inst.bob_conjugates, alice.factors)
    return inst.platform.normalize(alice.key.inverse() * lifted)


def shared_key_bob(inst: AagInstance, bob: AagPrivate) -> Word:
    """Bob's derivation of the same commutator from Alice's broadcast."""
    lifted = evaluate_factors(inst.alice_conjugates, bob.factors)
    return inst.platform.normalize(lifted.inverse() * bob.key)


def conjugacy_system(
    inst: AagInstance, side: str
) -> tuple[list[tuple[Word, Word]], tuple[Word, ...]]:
    """The attacker's simultaneous conjugacy system for one private key.

    side 'alice' targets Alice's key: pairs (bob_gens[j], alice_conjugates[j])
    with the solution constrained to the subgroup generated by alice_gens.
    side 'bob' is symmetric."""
    if side == "alice":
        return list(zip(inst.bob_gens, inst.alice_conjugates)), inst.alice_gens
    if side == "bob":
        return list(zip(inst.alice_gens, inst.bob_conjugates)), inst.bob_gens
    raise ValueError(f"side must be 'alice' or 'bob', not {side!r}")


def aag_to_scsp(inst: AagInstance):
    """Both attacker systems at once: (alice system, bob system), each a
    (pairs, subgroup generators) pair."""
    return conjugacy_system(inst, "alice"), conjugacy_system(inst, "bob")


def recover_key(inst: AagInstance, alice_key: Word, bob_key: Word) -> Word:
    """Shared key from any pair of system solutions.

    Any solution of the alice-side system inside the alice subgroup differs
    from Alice's key by a left factor centralizing every bob generator, and
    symmetrically; those factors cancel from the commutator, so the result
    equals the honest parties' key exactly."""
    return inst.platform.normalize(commutator(alice_key, bob_key))
