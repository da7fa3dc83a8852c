"""Hot integer-array kernels.

Words are 1-D int64 arrays of nonzero letters: +i is the i-th generator,
-i its inverse. Every function here is nopython-compatible; the numba
backend compiles them in place (see _backend). Pure-Python originals stay
reachable through the PY namespace for parity tests and benchmarks.
"""

import types

import numpy as np

from ._backend import NUMBA_ENABLED

# Sentinel for "not a power" answers; far outside any reachable exponent.
NOT_A_POWER = 2**62


def reduce_word(arr):
    # Stack-based free reduction, single left-to-right pass.
    n = arr.shape[0]
    out = np.empty(n, np.int64)
    top = -1
    for i in range(n):
        x = arr[i]
        if top >= 0 and out[top] == -x:
            top -= 1
        else:
            top += 1
            out[top] = x
    return out[: top + 1].copy()


def cancellation(a, b):
    # Letters annihilated between the end of a and the start of b (both reduced).
    la = a.shape[0]
    lb = b.shape[0]
    m = la if la < lb else lb
    t = 0
    while t < m and a[la - 1 - t] == -b[t]:
        t += 1
    return t


def concat_reduced(a, b):
    # Reduced product of two reduced words.
    t = cancellation(a, b)
    la = a.shape[0]
    lb = b.shape[0]
    out = np.empty(la + lb - 2 * t, np.int64)
    out[: la - t] = a[: la - t]
    out[la - t :] = b[t:]
    return out


def cyclic_strip(a):
    # Depth t such that a = a[:t] . core . a[:t]^-1 with the core cyclically
    # reduced. Reduced input can never strip to nothing.
    n = a.shape[0]
    t = 0
    while t < n - 1 - t and a[t] == -a[n - 1 - t]:
        t += 1
    return t


def signed_cancellation(u, su, v, sv):
    # cancellation(u^su, v^sv) without materializing the inverses.
    lu = u.shape[0]
    lv = v.shape[0]
    m = lu if lu < lv else lv
    t = 0
    while t < m:
        if su > 0:
            end = u[lu - 1 - t]
        else:
            end = -u[t]
        if sv > 0:
            start = v[t]
        else:
            start = -v[lv - 1 - t]
        if end != -start:
            break
        t += 1
    return t


def lambda_ok(flat, offs, num, den):
    # Strict cancellation condition over all signed pairs of the tuple,
    # skipping only the pairs that multiply to the identity by index:
    # (i, s) against (i, -s). c*den < num*min must hold for every pair.
    k = offs.shape[0] - 1
    for i in range(k):
        li = offs[i + 1] - offs[i]
        for si in (1, -1):
            for j in range(k):
                lj = offs[j + 1] - offs[j]
                for sj in (1, -1):
                    if i == j and si == -sj:
                        continue
                    c = signed_cancellation(
                        flat[offs[i] : offs[i + 1]],
                        si,
                        flat[offs[j] : offs[j + 1]],
                        sj,
                    )
                    m = li if li < lj else lj
                    if c * den >= num * m:
                        return False
    return True


def fill_nonbacktracking(rank, first, rest):
    # Map uniform draws to a freely reduced word: the first letter has 2*rank
    # choices, every later letter 2*rank - 1 (anything but the inverse of its
    # predecessor). Letter order: +1..+rank then -1..-rank.
    length = rest.shape[0] + 1
    out = np.empty(length, np.int64)
    idx = first
    if idx < rank:
        out[0] = idx + 1
    else:
        out[0] = -(idx - rank + 1)
    for t in range(1, length):
        prev = out[t - 1]
        banned = -prev
        if banned > 0:
            bidx = banned - 1
        else:
            bidx = rank - banned - 1
        c = rest[t - 1]
        if c >= bidx:
            c += 1
        if c < rank:
            out[t] = c + 1
        else:
            out[t] = -(c - rank + 1)
    return out


def power_exponent(q, p):
    # Exponent k with q = p^k, or NOT_A_POWER. p must be cyclically reduced
    # and nonempty so that p^k never cancels internally.
    lq = q.shape[0]
    lp = p.shape[0]
    if lq == 0:
        return 0
    if lp == 0 or lq % lp != 0:
        return NOT_A_POWER
    k = lq // lp
    ok = True
    for i in range(lq):
        if q[i] != p[i % lp]:
            ok = False
            break
    if ok:
        return k
    for i in range(lq):
        if q[i] != -p[lp - 1 - (i % lp)]:
            return NOT_A_POWER
    return -k


def trace(trans, start, word):
    # Run the word through a deterministic partial automaton; -1 when a
    # transition is missing.
    v = start
    for i in range(word.shape[0]):
        s = word[i]
        if s > 0:
            ix = 2 * (s - 1)
        else:
            ix = 2 * (-s - 1) + 1
        v = trans[v, ix]
        if v < 0:
            return -1
    return v


def trace_count(trans, nontree, start, word):
    # Like trace, also counting traversals of non-tree edges (= length of the
    # word over the breadth-first basis of the graph).
    v = start
    cnt = 0
    for i in range(word.shape[0]):
        s = word[i]
        if s > 0:
            ix = 2 * (s - 1)
        else:
            ix = 2 * (-s - 1) + 1
        if nontree[v, ix]:
            cnt += 1
        v = trans[v, ix]
        if v < 0:
            return -1, cnt
    return v, cnt


def trace_emit(trans, emit, start, word, out):
    # Like trace_count, but records the signed basis letter of every non-tree
    # edge traversed. emit[v, ix] is 0 on tree edges.
    v = start
    cnt = 0
    for i in range(word.shape[0]):
        s = word[i]
        if s > 0:
            ix = 2 * (s - 1)
        else:
            ix = 2 * (-s - 1) + 1
        e = emit[v, ix]
        if e != 0:
            out[cnt] = e
            cnt += 1
        v = trans[v, ix]
        if v < 0:
            return -1, cnt
    return v, cnt


def raag_reduce(word, dep):
    # Timestamped piling: cancel x^-1...x pairs whose interior commutes with
    # x, left to right with cascading. dep[u, v] is True when letters on
    # vertices u and v do not commute (diagonal True). Linear in len * nv.
    n = word.shape[0]
    nv = dep.shape[0] - 1
    stack_letter = np.empty((nv + 1, n), np.int64)
    stack_time = np.empty((nv + 1, n), np.int64)
    top = np.full(nv + 1, -1, np.int64)
    last = np.full(nv + 1, -1, np.int64)
    for t in range(n):
        let = word[t]
        v = let if let > 0 else -let
        cancel = False
        if top[v] >= 0 and stack_letter[v, top[v]] == -let:
            born = stack_time[v, top[v]]
            cancel = True
            for u in range(1, nv + 1):
                if u != v and dep[v, u] and last[u] > born:
                    cancel = False
                    break
        if cancel:
            top[v] -= 1
            if top[v] >= 0:
                last[v] = stack_time[v, top[v]]
            else:
                last[v] = -1
        else:
            top[v] += 1
            stack_letter[v, top[v]] = let
            stack_time[v, top[v]] = t
            last[v] = t
    slot = np.zeros(n, np.int64)
    m = 0
    for v in range(1, nv + 1):
        for s in range(top[v] + 1):
            slot[stack_time[v, s]] = stack_letter[v, s]
            m += 1
    out = np.empty(m, np.int64)
    i = 0
    for t in range(n):
        if slot[t] != 0:
            out[i] = slot[t]
            i += 1
    return out


def raag_lex(word, dep):
    # Lexicographically least linearization of the trace of a reduced word.
    # Order on letters: (vertex, sign) with +v before -v. Positions are
    # linked to the previous position of every dependent vertex, so at most
    # one position per vertex is ever ready.
    n = word.shape[0]
    nv = dep.shape[0] - 1
    pred_count = np.zeros(n, np.int64)
    out_count = np.zeros(n, np.int64)
    last_pos = np.full(nv + 1, -1, np.int64)
    for j in range(n):
        lj = word[j]
        v = lj if lj > 0 else -lj
        for u in range(1, nv + 1):
            if dep[v, u] and last_pos[u] >= 0:
                out_count[last_pos[u]] += 1
                pred_count[j] += 1
        last_pos[v] = j
    offs = np.zeros(n + 1, np.int64)
    for i in range(n):
        offs[i + 1] = offs[i] + out_count[i]
    edges = np.empty(offs[n], np.int64)
    fill = np.zeros(n, np.int64)
    for u in range(1, nv + 1):
        last_pos[u] = -1
    for j in range(n):
        lj = word[j]
        v = lj if lj > 0 else -lj
        for u in range(1, nv + 1):
            if dep[v, u] and last_pos[u] >= 0:
                i = last_pos[u]
                edges[offs[i] + fill[i]] = j
                fill[i] += 1
        last_pos[v] = j
    ready = np.full(nv + 1, -1, np.int64)
    for j in range(n):
        if pred_count[j] == 0:
            lj = word[j]
            v = lj if lj > 0 else -lj
            if ready[v] < 0:
                ready[v] = j
    out = np.empty(n, np.int64)
    for step in range(n):
        best_v = 0
        best_key = np.int64(4 * (nv + 2))
        for v in range(1, nv + 1):
            if ready[v] >= 0:
                lj = word[ready[v]]
                key = 2 * v if lj > 0 else 2 * v + 1
                if key < best_key:
                    best_key = key
                    best_v = v
        j = ready[best_v]
        out[step] = word[j]
        ready[best_v] = -1
        for idx in range(offs[j], offs[j] + out_count[j]):
            t = edges[idx]
            pred_count[t] -= 1
            if pred_count[t] == 0:
                lt = word[t]
                v = lt if lt > 0 else -lt
                ready[v] = t
    return out


_KERNELS = (
    "reduce_word",
    "cancellation",
    "concat_reduced",
    "cyclic_strip",
    "signed_cancellation",
    "lambda_ok",
    "fill_nonbacktracking",
    "power_exponent",
    "trace",
    "trace_count",
    "trace_emit",
    "raag_reduce",
    "raag_lex",
)

# Uncompiled originals, kept for parity tests and the backend benchmark.
PY = types.SimpleNamespace(**{name: globals()[name] for name in _KERNELS})

if NUMBA_ENABLED:
    from numba import njit

    for _name in _KERNELS:
        globals()[_name] = njit(cache=True)(globals()[_name])
    del _name
