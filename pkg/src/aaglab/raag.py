"""Right-angled Artin groups over finite commutation graphs.

Generators are graph vertices 1..n; two generators commute exactly when
their vertices are adjacent. Words reuse the free-group Word type; group
equality is decided through a piling-style reduction (geodesic
representative) followed by a lexicographically least linearization, which
together give a normal form.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import AlphabetMismatch, GraphComplete
from .subgroups import SubgroupGraph, evaluate_expression
from .words import Word

__all__ = [
    "CommutationGraph",
    "reduce_word",
    "normal_form",
    "is_trivial",
    "equal_in_group",
    "geodesic_length",
    "choose_projection",
    "project",
    "msp_heuristic",
]


class CommutationGraph:
    """Simple graph on vertices 1..n describing which generators commute."""

    __slots__ = ("n", "adj", "_dep")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise ValueError("need at least one vertex")
        self.n = n
        adj = np.zeros((n + 1, n + 1), dtype=np.bool_)
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range 1..{n}")
            if u == v:
                raise ValueError(f"loop edge at vertex {u}")
            adj[u, v] = adj[v, u] = True
        self.adj = adj
        # letters on u and v are dependent (order matters) when they do not
        # commute; a letter always depends on its own vertex
        dep = ~adj
        for v in range(n + 1):
            dep[v, v] = True
        dep[0, :] = False
        dep[:, 0] = False
        self._dep = dep

    @classmethod
    def path(cls, n: int) -> "CommutationGraph":
        """Chain 1-2-...-n."""
        return cls(n, [(i, i + 1) for i in range(1, n)])

    @classmethod
    def empty(cls, n: int) -> "CommutationGraph":
        """No edges: the free group of rank n."""
        return cls(n, [])

    @classmethod
    def complete(cls, n: int) -> "CommutationGraph":
        """All edges: the free abelian group of rank n."""
        return cls(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])

    def commutes(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def edge_list(self) -> list[tuple[int, int]]:
        out = []
        for u in range(1, self.n + 1):
            for v in range(u + 1, self.n + 1):
                if self.adj[u, v]:
                    out.append((u, v))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CommutationGraph):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.adj, other.adj))

    def __hash__(self) -> int:
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self) -> str:
        return f"CommutationGraph(n={self.n}, edges={self.edge_list()})"


def _check(graph: CommutationGraph, w: Word) -> None:
    if w.max_generator() > graph.n:
        raise AlphabetMismatch(
            f"letter {w.max_generator()} outside vertex range 1..{graph.n}"
        )


def reduce_word(graph: CommutationGraph, w: Word) -> Word:
    """A geodesic representative of w (piling reduction; letter order is
    preserved up to the cancellations performed)."""
    _check(graph, w)
    return Word._wrap(K.raag_reduce(w.array, graph._dep))


def normal_form(graph: CommutationGraph, w: Word) -> Word:
    """Canonical representative: the lexicographically least linearization
    of the reduced word. Equal group elements map to equal words."""
    reduced = reduce_word(graph, w)
    return Word._wrap(K.raag_lex(reduced.array, graph._dep))


def is_trivial(graph: CommutationGraph, w: Word) -> bool:
    return len(reduce_word(graph, w)) == 0


def equal_in_group(graph: CommutationGraph, u: Word, v: Word) -> bool:
    return is_trivial(graph, u * v.inverse())


def geodesic_length(graph: CommutationGraph, w: Word) -> int:
    return len(reduce_word(graph, w))


def choose_projection(graph: CommutationGraph) -> tuple[int, int]:
    """Lexicographically least pair of non-adjacent vertices; such a pair
    spans a free subgroup of rank 2 that is also a retract. Raises
    GraphComplete when every pair commutes."""
    for u in range(1, graph.n + 1):
        for v in range(u + 1, graph.n + 1):
            if not graph.adj[u, v]:
                return u, v
    raise GraphComplete("every pair of generators commutes")


def project(graph: CommutationGraph, w: Word, p: int, q: int) -> Word:
    """Retraction onto the free subgroup <p, q> (p, q non-adjacent), with
    p mapped to letter 1 and q to letter 2 of a rank-2 free group.

    Erasing all other vertices is a homomorphism, so the input need not be
    reduced."""
    if graph.adj[p, q]:
        raise ValueError(f"vertices {p} and {q} are adjacent")
    _check(graph, w)
    arr = w.array
    keep = (np.abs(arr) == p) | (np.abs(arr) == q)
    sel = arr[keep]
    out = np.where(np.abs(sel) == p, np.sign(sel), 2 * np.sign(sel)).astype(np.int64)
    return Word(out)


def msp_heuristic(
    graph: CommutationGraph,
    gens: Sequence[Word],
    target: Word,
    projection: Optional[tuple[int, int]] = None,
) -> Optional[Word]:
    """Membership-search heuristic through a rank-2 free quotient.

    Projects the generators and the target onto a non-adjacent vertex pair,
    solves membership exactly in the free image, lifts the expression, and
    keeps it only if it evaluates to the target in the group. Sound (never
    returns a wrong expression) but incomplete."""
    if projection is None:
        projection = choose_projection(graph)
    p, q = projection
    img_gens = [project(graph, g, p, q) for g in gens]
    img_target = project(graph, target, p, q)
    sub = SubgroupGraph(2, img_gens)
    if not sub.contains(img_target):
        return None
    expr = sub.express_in_generators(img_target)
    lifted = evaluate_expression(expr, list(gens))
    if equal_in_group(graph, lifted, target):
        return expr
    return None
