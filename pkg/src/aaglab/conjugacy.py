"""Exact conjugacy solvers in free groups.

Single equations u^x = v are solved by cyclic-word rotation; solution sets
are cosets of cyclic centralizers. Systems intersect those cosets one
equation at a time, with the two-coset intersection split into a commuting
(same primitive root) branch solved by arithmetic and a non-commuting
branch with at most one solution found by bounded enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernels as K
from .errors import IdentityInput, NotConjugate
from .subgroups import SubgroupGraph
from .words import IDENTITY, Word

__all__ = [
    "are_conjugate",
    "conjugator",
    "primitive_root",
    "centralizer_generator",
    "Coset",
    "Unique",
    "NoSolution",
    "SolutionSet",
    "meet_cosets",
    "solve_system",
    "solve_system_in_subgroup",
]


def _aligned_find(hay: bytes, needle: bytes, start: int) -> int:
    # First int64-aligned byte offset of needle in hay at or after start*8,
    # as an element index; -1 if absent.
    pos = hay.find(needle, start * 8)
    while pos != -1 and pos % 8:
        pos = hay.find(needle, pos + 1)
    return pos // 8 if pos >= 0 else -1


def _rotation_shift(a: np.ndarray, b: np.ndarray) -> int:
    # t with a[t:] + a[:t] == b, else -1. Arrays must have equal length.
    n = a.shape[0]
    if n == 0:
        return 0
    doubled = np.concatenate([a, a]).tobytes()
    t = _aligned_find(doubled, b.tobytes(), 0)
    return t if 0 <= t < n else -1


def are_conjugate(u: Word, v: Word) -> bool:
    """Whether u and v are conjugate: their cyclic cores are rotations."""
    cu = u.cyclic_core()
    cv = v.cyclic_core()
    if len(cu) != len(cv):
        return False
    return _rotation_shift(cu.array, cv.array) >= 0


def conjugator(u: Word, v: Word) -> Word:
    """Some x with x^-1 u x == v; raises NotConjugate."""
    pu, cu = u.cyclic_split()
    pv, cv = v.cyclic_split()
    if len(cu) != len(cv):
        raise NotConjugate(f"{u!r} and {v!r} have different core lengths")
    t = _rotation_shift(cu.array, cv.array)
    if t < 0:
        raise NotConjugate(f"{u!r} and {v!r} are not conjugate")
    x = pu * Word._wrap(cu.array[:t].copy()) * pv.inverse()
    return x


def primitive_root(w: Word) -> tuple[Word, int]:
    """(p, e) with w == p**e, p primitive and e >= 1. Identity input is
    rejected: the identity has no primitive root."""
    if len(w) == 0:
        raise IdentityInput("the identity word has no primitive root")
    conj, core = w.cyclic_split()
    arr = core.array
    n = arr.shape[0]
    doubled = np.concatenate([arr, arr]).tobytes()
    d = _aligned_find(doubled, arr.tobytes(), 1)
    if d < 1 or d >= n:
        d = n  # core is primitive
    p = Word._wrap(np.concatenate([conj.array, arr[:d], -conj.array[::-1]]))
    return p, n // d


def centralizer_generator(w: Word) -> Word:
    """Generator of the centralizer of w (cyclic in a free group)."""
    return primitive_root(w)[0]


# ---------------------------------------------------------------------------
# solution sets


@dataclass(frozen=True)
class Coset:
    """{root**m * translate : m in Z} with root != identity."""

    root: Word
    translate: Word

    def element(self, m: int) -> Word:
        return (self.root**m) * self.translate

    def __contains__(self, x: Word) -> bool:
        q = x * self.translate.inverse()
        return _exponent_of(q, self.root) is not None


@dataclass(frozen=True)
class Unique:
    """Exactly one solution."""

    x: Word


class NoSolution:
    """Empty solution set (singleton-style marker class)."""

    def __repr__(self) -> str:  # pragma: no cover
        return "NoSolution"


SolutionSet = Union[Coset, Unique, NoSolution]


def _exponent_of(q: Word, p: Word) -> Optional[int]:
    # j with q == p**j, for arbitrary reduced p != identity.
    conj, core = p.cyclic_split()
    inner = conj.inverse() * q * conj
    j = int(K.power_exponent(inner.array, core.array))
    return None if j == K.NOT_A_POWER else j


def meet_cosets(c1: Coset, c2: Coset) -> SolutionSet:
    """Intersection of two cyclic-coset solution sets."""
    r1, d1 = c1.root, c1.translate
    r2, d2 = c2.root, c2.translate
    if len(r1) == 0 or len(r2) == 0:
        raise IdentityInput("coset roots must be nontrivial")
    if r1 * r2 == r2 * r1:
        return _meet_commuting(r1, d1, r2, d2)
    return _meet_noncommuting(r1, d1, r2, d2)


def _meet_commuting(r1: Word, d1: Word, r2: Word, d2: Word) -> SolutionSet:
    # Both roots are powers of one primitive p: r1 = p^s, r2 = p^t.
    # r1^m d1 = r2^k d2 forces d2 d1^-1 = p^(s m - t k); solve the linear
    # congruence and return the surviving arithmetic progression.
    p, s = primitive_root(r1)
    t = _exponent_of(r2, p)
    assert t is not None and t != 0
    j = _exponent_of(d2 * d1.inverse(), p)
    if j is None:
        return NoSolution()
    g, x, _ = _ext_gcd(s, t)
    if j % g:
        return NoSolution()
    m0 = x * (j // g)
    period = abs(t) // g  # m ranges over m0 + period * Z
    m0 %= period
    lcm = abs(s * t) // g
    return Coset(root=p**lcm, translate=(p ** (s * m0)) * d1)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    # (g, x, y) with g = gcd(a, b) > 0 and x*a + y*b == g.
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    assert old_r == math.gcd(a, b)
    return old_r, old_s, old_t


def _meet_noncommuting(r1: Word, d1: Word, r2: Word, d2: Word) -> SolutionSet:
    # Non-commuting roots admit at most one common element: two distinct
    # ones would force a relation r1^dm == r2^dk and hence a common root.
    # Rearranged, r1^m d1 == r2^k d2 becomes rho2^(-k) c rho1^m == b over
    # the cyclic cores; enumerate m over a window wide enough to contain
    # any solution and test each candidate exactly.
    c1, rho1 = r1.cyclic_split()
    c2, rho2 = r2.cyclic_split()
    c_inv = (c2.inverse() * c1).inverse()
    b = c2.inverse() * (d2 * d1.inverse()) * c1
    window = 2 * (len(d1) + len(d2) + len(r1) + len(r2)) + 4
    rho1_inv = rho1.inverse()
    up = b  # b * rho1^(-m) for the current m >= 0
    un = b  # b * rho1^(+m) for the current -m <= 0
    for m in range(window + 1):
        for mm, acc in ((m, up), (-m, un)) if m else ((0, up),):
            j = _exponent_of(acc * c_inv, rho2)
            if j is not None:
                x = (r1**mm) * d1
                assert (r2 ** (-j)) * d2 == x
                return Unique(x)
        up = up * rho1_inv
        un = un * rho1
    return NoSolution()


# ---------------------------------------------------------------------------
# systems


def _clean_pairs(pairs: Sequence[tuple[Word, Word]]) -> list[tuple[Word, Word]]:
    out = []
    for u, v in pairs:
        if len(u) == 0 and len(v) == 0:
            continue  # vacuous: every x solves it
        out.append((u, v))
    return out


def solve_system(pairs: Sequence[tuple[Word, Word]]) -> SolutionSet:
    """All x with u^x == v for every (u, v) pair.

    Vacuous systems (every equation trivially true) raise IdentityInput,
    since the solution set is the whole group and has no coset form.
    """
    todo = _clean_pairs(pairs)
    if not todo:
        raise IdentityInput("system is vacuous: every x is a solution")
    current: Optional[SolutionSet] = None
    for idx, (u, v) in enumerate(todo):
        if len(u) == 0 or len(v) == 0:
            return NoSolution()  # identity is conjugate only to itself
        if not are_conjugate(u, v):
            return NoSolution()
        x0 = conjugator(u, v)
        pair_set = Coset(root=centralizer_generator(u), translate=x0)
        if current is None:
            current = pair_set
        else:
            assert isinstance(current, Coset)
            current = meet_cosets(current, pair_set)
        if isinstance(current, NoSolution):
            return current
        if isinstance(current, Unique):
            x = current.x
            for u2, v2 in todo[idx + 1 :]:
                if u2.conjugated_by(x) != v2:
                    return NoSolution()
            return current
    assert current is not None
    return current


def solve_system_in_subgroup(
    pairs: Sequence[tuple[Word, Word]], graph: SubgroupGraph
) -> Optional[tuple[Word, Word]]:
    """Some x inside the given subgroup solving the whole system, as
    (x, expression over the subgroup's defining generators); None when the
    system has no solution in the subgroup.

    A vacuous system is solved by the identity with the empty expression.
    """
    try:
        sol = solve_system(pairs)
    except IdentityInput:
        return IDENTITY, IDENTITY
    if isinstance(sol, NoSolution):
        return None
    if isinstance(sol, Unique):
        if not graph.contains(sol.x):
            return None
        return sol.x, graph.express_in_generators(sol.x)
    assert isinstance(sol, Coset)
    m = graph.meet_cyclic_coset(sol.root, sol.translate)
    if m is None:
        return None
    x = sol.element(m)
    return x, graph.express_in_generators(x)
