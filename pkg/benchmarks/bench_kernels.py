#!/usr/bin/env python3
"""Time the hot integer kernels under both backends.

The backend is fixed at import time by AAGLAB_BACKEND, so this script
re-executes itself in a subprocess per backend and prints a comparison
table. Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --reps 2000
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _inputs(rng):
    """One shared bundle of pre-generated inputs for every kernel."""
    from aaglab import _kernels as K

    words = [
        K.PY.reduce_word(
            (rng.choice((-1, 1), 200) * rng.integers(1, 4, 200)).astype(np.int64)
        )
        for _ in range(256)
    ]
    raw = [
        (rng.choice((-1, 1), 200) * rng.integers(1, 4, 200)).astype(np.int64)
        for _ in range(256)
    ]
    nv = 6
    dep = np.zeros((nv + 1, nv + 1), np.bool_)
    for u in range(1, nv + 1):
        for v in range(1, nv + 1):
            # path dependence: letters commute unless adjacent or equal
            dep[u, v] = u == v or abs(u - v) == 1
    raag_raw = [
        (rng.choice((-1, 1), 200) * rng.integers(1, nv + 1, 200)).astype(np.int64)
        for _ in range(128)
    ]
    raag_reduced = [K.PY.raag_reduce(w, dep) for w in raag_raw]
    trans = rng.integers(-1, 50, size=(50, 6)).astype(np.int64)
    nontree = rng.random(size=(50, 6)) < 0.3
    tuples = []
    for _ in range(128):
        ws = [
            K.PY.reduce_word(
                (rng.choice((-1, 1), 50) * rng.integers(1, 3, 50)).astype(np.int64)
            )
            for _ in range(4)
        ]
        ws = [w for w in ws if w.shape[0]]
        flat = np.concatenate(ws)
        offs = np.zeros(len(ws) + 1, np.int64)
        offs[1:] = np.cumsum([w.shape[0] for w in ws])
        tuples.append((flat, offs))
    return {
        "words": words,
        "raw": raw,
        "dep": dep,
        "raag_raw": raag_raw,
        "raag_reduced": raag_reduced,
        "trans": trans,
        "nontree": nontree,
        "tuples": tuples,
    }


def _bench_one(fn, calls, reps):
    fn(*calls[0])  # warmup; compiles under the numba backend
    t0 = time.perf_counter()
    for _ in range(reps):
        for args in calls:
            fn(*args)
    return time.perf_counter() - t0


def run_inner(reps):
    from aaglab import _kernels as K
    from aaglab._backend import BACKEND

    rng = np.random.default_rng(12345)
    data = _inputs(rng)
    words, raw = data["words"], data["raw"]
    dep = data["dep"]
    cases = {
        "reduce_word": (K.reduce_word, [(w,) for w in raw]),
        "concat_reduced": (
            K.concat_reduced,
            [(words[i], words[i + 1]) for i in range(0, 254, 2)],
        ),
        "cyclic_strip": (K.cyclic_strip, [(w,) for w in words]),
        "lambda_ok": (K.lambda_ok, [(f, o, 1, 4) for f, o in data["tuples"]]),
        "trace_count": (
            K.trace_count,
            [(data["trans"], data["nontree"], 0, w) for w in words],
        ),
        "raag_reduce": (K.raag_reduce, [(w, dep) for w in data["raag_raw"]]),
        "raag_lex": (K.raag_lex, [(w, dep) for w in data["raag_reduced"]]),
    }
    out = []
    for name, (fn, calls) in cases.items():
        seconds = _bench_one(fn, calls, reps)
        out.append(
            {
                "kernel": name,
                "backend": BACKEND,
                "calls": len(calls) * reps,
                "seconds": seconds,
            }
        )
    json.dump(out, sys.stdout)


def run_compare(reps):
    results = {}
    for backend in ("python", "numba"):
        env = dict(os.environ, AAGLAB_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--inner", "--reps", str(reps)],
            env=env,
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            sys.stderr.write(proc.stderr)
            raise SystemExit(f"{backend} run failed")
        for row in json.loads(proc.stdout):
            results.setdefault(row["kernel"], {})[backend] = row

    print(f"{'kernel':<16}{'calls':>10}{'python':>12}{'numba':>12}{'speedup':>10}")
    for kernel, by in results.items():
        py, nb = by["python"], by["numba"]
        ratio = py["seconds"] / nb["seconds"] if nb["seconds"] > 0 else float("inf")
        print(
            f"{kernel:<16}{py['calls']:>10}"
            f"{py['seconds']:>11.4f}s{nb['seconds']:>11.4f}s{ratio:>9.1f}x"
        )


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=20, help="repetitions per kernel")
    ap.add_argument("--inner", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.inner:
        run_inner(args.reps)
    else:
        run_compare(args.reps)


if __name__ == "__main__":
    main()
