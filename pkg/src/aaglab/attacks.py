"""Attacks on the commutator key exchange.

Three adversaries: an exact one that solves the simultaneous conjugacy
systems with the subgroup-constrained solver (free platform), a
length-based hill descender that greedily conjugates the published tuple
back toward the originals, and a quotient adversary that maps a
right-angled Artin instance onto a rank-2 free quotient, solves there
exactly, and lifts. All of them report a key only after verifying it, so a
reported success is always a true break.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .aag import AagInstance, RaagPlatform, conjugacy_system, recover_key
from .conjugacy import solve_system_in_subgroup
from .errors import GraphComplete, NotFreePlatform
from .raag import choose_projection, equal_in_group, project
from .subgroups import SubgroupGraph, evaluate_expression
from .words import IDENTITY, Word

__all__ = [
    "AmbientLength",
    "InnerLength",
    "ProjectedLength",
    "make_objective",
    "inner_length",
    "LbaResult",
    "SideResult",
    "AttackReport",
    "lba_best_descend",
    "lba_solve_scsp_star",
    "lba_attack",
    "exact_attack",
    "quotient_attack",
    "run_attack",
]


# ---------------------------------------------------------------------------
# objectives


class AmbientLength:
    """Plain word length."""

    name = "ambient"

    def __call__(self, w: Word) -> int:
        return len(w)


class InnerLength:
    """Length over the basis of a fixed ambient subgroup; only defined for
    members of that subgroup."""

    name = "inner"

    def __init__(self, graph: SubgroupGraph):
        self.graph = graph

    def __call__(self, w: Word) -> int:
        return self.graph.basis_length(w)


class ProjectedLength:
    """Length of the image under erasing all letters but two."""

    name = "projected"

    def __init__(self, p: int = 1, q: int = 2):
        self.p = p
        self.q = q

    def __call__(self, w: Word) -> int:
        arr = w.array
        keep = (np.abs(arr) == self.p) | (np.abs(arr) == self.q)
        sel = arr[keep]
        img = np.where(np.abs(sel) == self.p, np.sign(sel), 2 * np.sign(sel))
        return len(Word(img.astype(np.int64)))


def inner_length(zgens: Sequence[Word], w: Word, rank: Optional[int] = None) -> int:
    """Word length over the free basis of the subgroup generated by zgens.
    Raises NotMember when w lies outside it."""
    if rank is None:
        rank = max([g.max_generator() for g in zgens] + [w.max_generator(), 1])
    return SubgroupGraph(rank, list(zgens)).basis_length(w)


def make_objective(
    name: str, conjugator_gens: Sequence[Word], pairs: Sequence[tuple[Word, Word]]
) -> Callable[[Word], int]:
    """Objective factory for one side's system. 'inner' folds the subgroup
    generated by the conjugator generators together with the left-hand
    words, which contains every tuple the descent can visit."""
    if name == "ambient":
        return AmbientLength()
    if name == "projected":
        return ProjectedLength()
    if name == "inner":
        rank = max(
            [w.max_generator() for w in conjugator_gens]
            + [u.max_generator() for u, _ in pairs]
            + [v.max_generator() for _, v in pairs]
            + [1]
        )
        zgens = list(conjugator_gens) + [u for u, _ in pairs]
        return InnerLength(SubgroupGraph(rank, zgens))
    raise ValueError(f"unknown objective {name!r}")


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class LbaResult:
    success: bool
    g: Optional[Word]
    steps: int
    reason: str  # success | no_descent | iteration_cap | outside_subgroup
    objective_trace: tuple[int, ...] = ()
    # signed 1-based generator indices, in the order the moves were applied
    moves: tuple[int, ...] = ()
    # word over the generator indices evaluating to g (success only)
    expression: Optional[Word] = None


@dataclass(frozen=True)
class SideResult:
    side: str
    success: bool
    solution: Optional[Word]
    steps: int
    reason: str


@dataclass(frozen=True)
class AttackReport:
    attack: str
    success: bool
    shared_key: Optional[Word]
    alice: SideResult
    bob: SideResult
    elapsed_ms: float = 0.0


# ---------------------------------------------------------------------------
# length-based attack


def default_iteration_cap(targets: Sequence[Word]) -> int:
    """Default descent budget: four moves per target letter, at least one."""
    return max(1, 4 * sum(len(v) for v in targets))


def lba_best_descend(
    conjugator_gens: Sequence[Word],
    base: Sequence[Word],
    targets: Sequence[Word],
    objective: Callable[[Word], int],
    max_iters: Optional[int] = None,
) -> LbaResult:
    """Greedy descent for x with base_j^x == targets_j and x a product of
    the given generators.

    State is the tuple c_j, starting at targets; every move conjugates the
    whole tuple by one signed generator, keeping the move of smallest
    summed objective (ties: lowest generator index, then positive sign).
    Moves that keep the objective equal are taken (plateau walking); the
    search stops when every move strictly increases it or the iteration cap
    is hit. Success means the tuple reached base exactly; the returned g
    satisfies every equation by construction, and `expression` spells g as
    a word over the signed generator indices.
    """
    if len(base) != len(targets):
        raise ValueError(
            f"tuple size mismatch: {len(base)} base words, {len(targets)} targets"
        )
    if max_iters is None:
        max_iters = default_iteration_cap(targets)
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    base = list(base)
    cur = list(targets)
    gens = list(conjugator_gens)
    acc = IDENTITY  # product of the generator powers applied so far
    moves: list[int] = []
    trace = [sum(objective(w) for w in cur)]
    steps = 0
    while True:
        if cur == base:
            g = acc.inverse()
            assert all(u.conjugated_by(g) == v for u, v in zip(base, targets))
            expr = Word(np.array([-s for s in reversed(moves)], dtype=np.int64))
            return LbaResult(True, g, steps, "success", tuple(trace), tuple(moves), expr)
        if steps >= max_iters:
            return LbaResult(False, None, steps, "iteration_cap", tuple(trace), tuple(moves))
        best_val = None
        best_move = None
        for i, gen in enumerate(gens):
            for eps in (1, -1):
                t = gen if eps > 0 else gen.inverse()
                cand = [w.conjugated_by(t) for w in cur]
                val = sum(objective(w) for w in cand)
                if best_val is None or val < best_val:
                    best_val = val
                    best_move = (eps * (i + 1), t, cand)
        if best_val is None or best_val > trace[-1]:
            return LbaResult(False, None, steps, "no_descent", tuple(trace), tuple(moves))
        s, t, cur = best_move
        acc = acc * t
        moves.append(s)
        trace.append(best_val)
        steps += 1


def lba_solve_scsp_star(
    pairs: Sequence[tuple[Word, Word]],
    subgroup_gens: Sequence[Word],
    objective: Optional[Callable[[Word], int]] = None,
    max_iters: Optional[int] = None,
) -> Optional[Word]:
    """Heuristic subgroup-constrained conjugacy solver via best descent.

    Returns an expression over the subgroup generators' indices whose value
    solves every equation, or None when the descent gives up. The default
    objective measures length inside the subgroup spanned by the generators
    and the left-hand words; right-hand words outside that subgroup are a
    proof that no solution exists over these generators."""
    base = [u for u, _ in pairs]
    targets = [v for _, v in pairs]
    if objective is None:
        objective = make_objective("inner", subgroup_gens, list(pairs))
    if isinstance(objective, InnerLength):
        if not all(objective.graph.contains(v) for v in targets):
            return None
    res = lba_best_descend(subgroup_gens, base, targets, objective, max_iters)
    if not res.success:
        return None
    assert res.expression is not None
    assert evaluate_expression(res.expression, list(subgroup_gens)) == res.g
    return res.expression


def _lba_side(
    inst: AagInstance, side: str, objective_name: str, max_iters: Optional[int]
) -> SideResult:
    pairs, gens = conjugacy_system(inst, side)
    if objective_name == "inner":
        # membership pre-check; a right-hand side outside the reachable
        # subgroup proves there is no solution over these generators
        obj = make_objective("inner", gens, pairs)
        graph: SubgroupGraph = obj.graph  # type: ignore[union-attr]
        if not all(graph.contains(v) for _, v in pairs):
            return SideResult(side, False, None, 0, "outside_subgroup")
    else:
        obj = make_objective(objective_name, gens, pairs)
    res = lba_best_descend(
        gens, [u for u, _ in pairs], [v for _, v in pairs], obj, max_iters
    )
    return SideResult(side, res.success, res.g, res.steps, res.reason)


def lba_attack(
    inst: AagInstance, objective: str = "ambient", max_iters: Optional[int] = None
) -> AttackReport:
    """Run the length-based descent on both private keys; succeed only when
    both sides do, in which case the recovered key is exact."""
    t0 = time.perf_counter()
    a = _lba_side(inst, "alice", objective, max_iters)
    b = _lba_side(inst, "bob", objective, max_iters)
    ok = a.success and b.success
    key = recover_key(inst, a.solution, b.solution) if ok else None
    ms = (time.perf_counter() - t0) * 1000.0
    return AttackReport("lba", ok, key, a, b, elapsed_ms=ms)


# ---------------------------------------------------------------------------
# exact attack (free platform)


def _exact_side(inst: AagInstance, side: str) -> SideResult:
    pairs, gens = conjugacy_system(inst, side)
    graph = SubgroupGraph(inst.platform.rank, gens)
    got = solve_system_in_subgroup(pairs, graph)
    if got is None:
        return SideResult(side, False, None, 0, "no_solution")
    x, _expr = got
    return SideResult(side, True, x, 0, "success")


def exact_attack(inst: AagInstance) -> AttackReport:
    """Deterministic full break over free platforms: solve both
    subgroup-constrained conjugacy systems exactly."""
    if inst.platform.kind != "free":
        raise NotFreePlatform("exact attack runs on free platforms only")
    t0 = time.perf_counter()
    a = _exact_side(inst, "alice")
    b = _exact_side(inst, "bob")
    ok = a.success and b.success
    key = recover_key(inst, a.solution, b.solution) if ok else None
    ms = (time.perf_counter() - t0) * 1000.0
    return AttackReport("exact", ok, key, a, b, elapsed_ms=ms)


# ---------------------------------------------------------------------------
# quotient attack (RAAG platform)


def _quotient_side(inst: AagInstance, side: str, p: int, q: int) -> SideResult:
    graph = inst.platform.graph  # type: ignore[union-attr]
    pairs, gens = conjugacy_system(inst, side)
    img_pairs = [(project(graph, u, p, q), project(graph, v, p, q)) for u, v in pairs]
    img_gens = [project(graph, g, p, q) for g in gens]
    got = solve_system_in_subgroup(img_pairs, SubgroupGraph(2, img_gens))
    # steps = projected equations processed by the exact solver
    n_eq = len(img_pairs)
    if got is None:
        return SideResult(side, False, None, n_eq, "no_projected_solution")
    _x_img, expr = got
    lifted = evaluate_expression(expr, list(gens))
    # the lift solves only the projected system a priori; accept it only if
    # it solves the genuine one
    for u, v in pairs:
        if not equal_in_group(graph, lifted.inverse() * u * lifted, v):
            return SideResult(side, False, None, n_eq, "lift_rejected")
    return SideResult(side, True, inst.platform.normalize(lifted), n_eq, "success")


def quotient_attack(inst: AagInstance) -> AttackReport:
    """Attack a right-angled Artin instance through a free quotient.

    Sound by construction: a key is reported only when both lifted
    solutions solve their systems in the group itself, which makes the
    commutator of the lifts equal to the honest shared key."""
    if not isinstance(inst.platform, RaagPlatform):
        raise ValueError("quotient attack needs a RAAG platform")
    t0 = time.perf_counter()
    try:
        p, q = choose_projection(inst.platform.graph)
    except GraphComplete:
        fail = SideResult("alice", False, None, 0, "graph_complete")
        failb = SideResult("bob", False, None, 0, "graph_complete")
        ms = (time.perf_counter() - t0) * 1000.0
        return AttackReport("qa", False, None, fail, failb, elapsed_ms=ms)
    a = _quotient_side(inst, "alice", p, q)
    b = _quotient_side(inst, "bob", p, q)
    ok = a.success and b.success
    key = recover_key(inst, a.solution, b.solution) if ok else None
    ms = (time.perf_counter() - t0) * 1000.0
    return AttackReport("qa", ok, key, a, b, elapsed_ms=ms)


def run_attack(inst: AagInstance, name: str, **kw) -> AttackReport:
    """Dispatch by attack name: lba | exact | qa (quotient)."""
    if name == "lba":
        return lba_attack(inst, **kw)
    if name == "exact":
        return exact_attack(inst)
    if name in ("qa", "quotient"):
        return quotient_attack(inst)
    raise ValueError(f"unknown attack {name!r}")
