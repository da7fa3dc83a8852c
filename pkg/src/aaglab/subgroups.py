"""Folded subgroup graphs for finitely generated subgroups of free groups.

A subgroup is represented by its folded core graph with a marked base
vertex: vertices are states, directed transitions are labeled by signed
letters, and a word lies in the subgroup exactly when it traces a loop at
the base. The graph is canonicalized by breadth-first discovery order, so
equal subgroups yield byte-identical transition tables.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import AlphabetMismatch, NotMember
from .words import IDENTITY, Word

__all__ = [
    "SubgroupGraph",
    "has_free_basis",
    "lambda_condition",
    "quarter_condition",
    "evaluate_expression",
]


def _ix(s: int) -> int:
    # Column of a signed letter in the transition table: +1,-1,+2,-2,...
    return 2 * (s - 1) if s > 0 else 2 * (-s - 1) + 1


def _letter(ix: int) -> int:
    return ix // 2 + 1 if ix % 2 == 0 else -(ix // 2 + 1)


def _check_alphabet(rank: int, ws: Sequence[Word]) -> None:
    for w in ws:
        if w.max_generator() > rank:
            raise AlphabetMismatch(
                f"letter {w.max_generator()} outside ambient rank {rank}"
            )


class SubgroupGraph:
    """Canonical folded core graph of ⟨generators⟩ ≤ F(rank)."""

    __slots__ = (
        "rank",
        "generators",
        "trans",
        "n_vertices",
        "n_edges",
        "_tree_parent",
        "_nontree",
        "_emit",
        "_basis",
        "_basis_in_gens",
    )

    def __init__(self, rank: int, generators: Sequence[Word]):
        if rank < 1:
            raise ValueError("ambient rank must be >= 1")
        generators = tuple(generators)
        _check_alphabet(rank, generators)
        self.rank = rank
        self.generators = generators
        self.trans = _build_core(rank, generators)
        self.n_vertices = self.trans.shape[0]
        self.n_edges = int((self.trans >= 0).sum()) // 2
        self._tree_parent: Optional[list] = None
        self._nontree: Optional[np.ndarray] = None
        self._emit: Optional[np.ndarray] = None
        self._basis: Optional[tuple] = None
        self._basis_in_gens: Optional[tuple] = None

    # -- membership -----------------------------------------------------

    def contains(self, w: Word) -> bool:
        if w.max_generator() > self.rank:
            raise AlphabetMismatch(
                f"letter {w.max_generator()} outside ambient rank {self.rank}"
            )
        return int(K.trace(self.trans, 0, w.array)) == 0

    def __contains__(self, w: Word) -> bool:
        return self.contains(w)

    # -- invariants ------------------------------------------------------

    @property
    def graph_rank(self) -> int:
        """Rank of the subgroup: edges - vertices + 1 of the core graph."""
        return self.n_edges - self.n_vertices + 1

    def key(self) -> bytes:
        """Canonical fingerprint; equal subgroups give equal keys."""
        return self.trans.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupGraph):
            return NotImplemented
        return self.rank == other.rank and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.rank, self.key()))

    # -- spanning tree and basis ----------------------------------------

    def _ensure_tree(self) -> None:
        if self._tree_parent is not None:
            return
        # Canonicalization already ordered vertices by BFS discovery, so a
        # fresh BFS reproduces the same tree.
        V = self.n_vertices
        parent: list = [None] * V
        seen = np.zeros(V, dtype=bool)
        seen[0] = True
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for ix in range(2 * self.rank):
                v = int(self.trans[u, ix])
                if v >= 0 and not seen[v]:
                    seen[v] = True
                    parent[v] = (u, ix)
                    queue.append(v)
        nontree = np.zeros((V, 2 * self.rank), dtype=np.bool_)
        emit = np.zeros((V, 2 * self.rank), dtype=np.int64)
        basis = []
        paths = _tree_paths(parent, V)
        for u in range(V):
            for ix in range(2 * self.rank):
                v = int(self.trans[u, ix])
                if v < 0:
                    continue
                if parent[v] == (u, ix) or parent[u] == (v, ix ^ 1):
                    continue  # tree edge
                # non-tree edge; keep the lesser directed representative
                if (u, ix) > (v, ix ^ 1):
                    continue
                eid = len(basis) + 1
                nontree[u, ix] = True
                nontree[v, ix ^ 1] = True
                emit[u, ix] = eid
                emit[v, ix ^ 1] = -eid
                w = paths[u] * Word((_letter(ix),)) * paths[v].inverse()
                basis.append(w)
        self._tree_parent = parent
        self._nontree = nontree
        self._emit = emit
        self._basis = tuple(basis)

    def basis(self) -> tuple[Word, ...]:
        """Free basis of the subgroup read off the spanning tree."""
        self._ensure_tree()
        return self._basis  # type: ignore[return-value]

    def basis_length(self, w: Word) -> int:
        """Length of w over the graph basis (raises NotMember)."""
        self._ensure_tree()
        end, cnt = K.trace_count(self.trans, self._nontree, 0, w.array)
        if int(end) != 0:
            raise NotMember(f"{w!r} is not in the subgroup")
        return int(cnt)

    def express(self, w: Word) -> Word:
        """w as a word over the graph basis (letters index basis())."""
        self._ensure_tree()
        out = np.empty(max(len(w), 1), dtype=np.int64)
        end, cnt = K.trace_emit(self.trans, self._emit, 0, w.array, out)
        if int(end) != 0:
            raise NotMember(f"{w!r} is not in the subgroup")
        # a reduced word traces a non-backtracking path, so the emitted
        # basis letters are already freely reduced
        return Word._wrap(out[: int(cnt)].copy())

    # -- expressions over the defining generators ------------------------

    def _ensure_basis_in_gens(self) -> None:
        if self._basis_in_gens is not None:
            return
        basis = self.basis()
        m = len(basis)
        exprs = [self.express(g) for g in self.generators]
        table = _invert_generating_tuple(exprs, m)
        out = []
        for t in range(m):
            expr = table[t]
            assert evaluate_expression(expr, self.generators) == basis[t]
            out.append(expr)
        self._basis_in_gens = tuple(out)

    def basis_in_generators(self) -> tuple[Word, ...]:
        """Each graph-basis element as a word over the defining generators
        (letters index self.generators)."""
        self._ensure_basis_in_gens()
        return self._basis_in_gens  # type: ignore[return-value]

    def express_in_generators(self, w: Word) -> Word:
        """w as a word over the defining generators (raises NotMember)."""
        self._ensure_basis_in_gens()
        over_basis = self.express(w)
        out = IDENTITY
        for t in over_basis:
            piece = self._basis_in_gens[abs(t) - 1]  # type: ignore[index]
            out = out * (piece if t > 0 else piece.inverse())
        assert evaluate_expression(out, self.generators) == w
        return out

    # -- cyclic coset intersection ---------------------------------------

    def meet_cyclic_coset(self, r: Word, d: Word) -> Optional[int]:
        """Exponent m minimizing |m| with r^m * d in the subgroup, or None.

        Ties between m and -m resolve to the positive side. r may be any
        word; r == identity degenerates to a membership test.
        """
        if r.max_generator() > self.rank or d.max_generator() > self.rank:
            raise AlphabetMismatch("coset data outside ambient rank")
        if self.contains(d):
            return 0
        if len(r) == 0:
            return None
        mp = self._meet_one_sided(r, d)
        mn = self._meet_one_sided(r.inverse(), d)
        if mp is not None and (mn is None or mp <= mn):
            return mp
        if mn is not None:
            return -mn
        return None

    def _meet_one_sided(self, r: Word, d: Word) -> Optional[int]:
        # Smallest m >= 1 with r^m * d in the subgroup, or None.
        conj, core = r.cyclic_split()
        e = conj.inverse() * d
        m0 = len(e) // len(core) + 2
        cur = d
        for m in range(1, m0):
            cur = r * cur
            if self.contains(cur):
                return m
        # For m >= m0 the word stabilizes: r^m d = conj . core^(m-m0) . X
        # with no cancellation, where X = reduce(core^m0 . e).
        x_tail = ((core**m0) * e).array
        v = int(K.trace(self.trans, 0, conj.array))
        if v < 0:
            return None
        core_arr = core.array
        seen = set()
        j = 0
        while v not in seen:
            seen.add(v)
            if int(K.trace(self.trans, v, x_tail)) == 0:
                return m0 + j
            v = int(K.trace(self.trans, v, core_arr))
            if v < 0:
                return None
            j += 1
        return None

    def __repr__(self) -> str:
        return (
            f"SubgroupGraph(rank={self.rank}, vertices={self.n_vertices}, "
            f"edges={self.n_edges}, graph_rank={self.graph_rank})"
        )


# ---------------------------------------------------------------------------
# construction


def _build_core(rank: int, generators: Sequence[Word]) -> np.ndarray:
    # Wedge of loops, folded with a union-find worklist, pruned to the core,
    # then renumbered in BFS discovery order.
    n_inner = sum(max(len(g) - 1, 0) for g in generators)
    parent = list(range(1 + n_inner))
    adj: list[dict] = [dict() for _ in range(1 + n_inner)]

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    queue: deque = deque()
    nxt = 1
    for g in generators:
        prev = 0
        for pos in range(len(g)):
            s = int(g.array[pos])
            tgt = 0 if pos == len(g) - 1 else nxt
            if tgt == nxt:
                nxt += 1
            queue.append((prev, _ix(s), tgt))
            queue.append((tgt, _ix(-s), prev))
            prev = tgt
    while queue:
        u, ix, v = queue.popleft()
        u, v = find(u), find(v)
        w = adj[u].get(ix)
        if w is None:
            adj[u][ix] = v
            continue
        w = find(w)
        adj[u][ix] = w
        if w == v:
            continue
        keep, drop = (v, w) if len(adj[v]) >= len(adj[w]) else (w, v)
        if drop == find(0):  # never retire the base vertex
            keep, drop = drop, keep
        parent[drop] = keep
        for jx, t in adj[drop].items():
            queue.append((keep, jx, t))
        adj[drop] = {}
    base = find(0)
    live = {x for x in range(1 + n_inner) if find(x) == x}
    for u in live:
        adj[u] = {ix: find(t) for ix, t in adj[u].items()}
    for u in live:  # folded determinism and symmetry must hold now
        for ix, t in adj[u].items():
            assert adj[t].get(ix ^ 1) == u
    # prune hanging trees: repeatedly drop non-base vertices of degree <= 1
    leaf = deque(u for u in live if u != base and len(adj[u]) <= 1)
    while leaf:
        u = leaf.popleft()
        if u not in live:
            continue
        live.discard(u)
        for ix, t in adj[u].items():
            del adj[t][ix ^ 1]
            if t != base and len(adj[t]) <= 1:
                leaf.append(t)
        adj[u] = {}
    # canonical renumbering by BFS over letter columns in fixed order
    order = {base: 0}
    bfs = deque([base])
    while bfs:
        u = bfs.popleft()
        for ix in range(2 * rank):
            t = adj[u].get(ix)
            if t is not None and t not in order:
                order[t] = len(order)
                bfs.append(t)
    assert len(order) == len(live)
    trans = np.full((len(order), 2 * rank), -1, dtype=np.int64)
    for u, uid in order.items():
        for ix, t in adj[u].items():
            trans[uid, ix] = order[t]
    return trans


def _tree_paths(parent: list, V: int) -> list[Word]:
    paths: list = [None] * V
    paths[0] = IDENTITY
    for v in range(V):
        if paths[v] is not None:
            continue
        chain = []
        x = v
        while paths[x] is None:
            chain.append(x)
            x = parent[x][0]
        for y in reversed(chain):
            u, ix = parent[y]
            paths[y] = paths[u] * Word((_letter(ix),))
    return paths


# ---------------------------------------------------------------------------
# tuple predicates


def has_free_basis(ws: Sequence[Word], rank: Optional[int] = None) -> bool:
    """True when the tuple freely generates its span: the core graph of
    ⟨ws⟩ has rank exactly len(ws)."""
    ws = tuple(ws)
    if rank is None:
        rank = max((w.max_generator() for w in ws), default=1)
        rank = max(rank, 1)
    g = SubgroupGraph(rank, ws)
    return g.graph_rank == len(ws)


def lambda_condition(ws: Sequence[Word], lam: Fraction) -> bool:
    """Strict small-cancellation test over all signed pairs of the tuple.

    Every product u^s * v^t of distinct signed entries (only the exact
    inverse pairing of an entry with itself is exempt) must cancel fewer
    than lam * min(|u|, |v|) letters. Repeated or mutually inverse entries
    therefore fail, as does any identity entry.
    """
    lam = Fraction(lam)
    from .words import words_to_flat

    flat, offs = words_to_flat(tuple(ws))
    return bool(
        K.lambda_ok(flat, offs, np.int64(lam.numerator), np.int64(lam.denominator))
    )


def quarter_condition(ws: Sequence[Word]) -> bool:
    """lambda_condition at 1/4."""
    return lambda_condition(ws, Fraction(1, 4))


# ---------------------------------------------------------------------------
# expressions


def evaluate_expression(expr: Word, gens: Sequence[Word]) -> Word:
    """Interpret letters of expr as indices into gens (1-based, sign means
    inverse) and multiply out."""
    if expr.max_generator() > len(gens):
        raise AlphabetMismatch("expression letter outside generator tuple")
    out = IDENTITY
    for t in expr:
        g = gens[abs(t) - 1]
        out = out * (g if t > 0 else g.inverse())
    return out


def _half_key(w: Word) -> tuple:
    # Inversion-invariant well-order key: length first, then the two
    # half-prefixes of w and w^-1 compared letterwise.
    n = len(w)
    h = (n + 1) // 2
    arr = w.array

    def lk(x: int) -> tuple[int, int]:
        return (abs(x), 0 if x > 0 else 1)

    pa = tuple(lk(int(x)) for x in arr[:h])
    pb = tuple(lk(-int(x)) for x in arr[n - h :][::-1])
    return (n, min(pa, pb), max(pa, pb))


def _invert_generating_tuple(exprs: Sequence[Word], m: int) -> list[Word]:
    """Given words over an m-letter alphabet that generate the whole free
    group of rank m, express each of the m letters over the input tuple.

    Nielsen-reduces the tuple with tracked history; a generating tuple of
    the full group reduces to the standard letters up to sign and order.
    Returns table[t] = expression (letters = 1-based input indices) whose
    evaluation equals letter t+1.
    """
    pairs: list[tuple[Word, Word]] = [
        (w, Word((j + 1,))) for j, w in enumerate(exprs)
    ]
    changed = True
    while changed:
        changed = False
        pairs = [(w, t) for (w, t) in pairs if len(w) > 0]
        n = len(pairs)
        for j in range(n):
            wj, tj = pairs[j]
            best = None
            for i in range(n):
                if i == j:
                    continue
                wi, ti = pairs[i]
                for sg in (1, -1):
                    ws = wi if sg > 0 else wi.inverse()
                    ts = ti if sg > 0 else ti.inverse()
                    for cand, ct in ((ws * wj, ts * tj), (wj * ws, tj * ts)):
                        if _half_key(cand) < _half_key(wj):
                            if best is None or _half_key(cand) < _half_key(best[0]):
                                best = (cand, ct)
            if best is not None:
                pairs[j] = best
                changed = True
        if changed:
            continue
    pairs = [(w, t) for (w, t) in pairs if len(w) > 0]
    table: list = [None] * m
    seen = set()
    for w, t in pairs:
        assert len(w) == 1, "tracked reduction did not reach single letters"
        letter = int(w.array[0])
        idx = abs(letter) - 1
        assert idx not in seen
        seen.add(idx)
        table[idx] = t if letter > 0 else t.inverse()
    assert len(seen) == m, "tuple does not generate the full free group"
    return table
