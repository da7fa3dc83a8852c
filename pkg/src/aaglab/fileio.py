"""File formats: JSON schemas for every artifact the CLI reads or writes.

All words travel as arrays of signed nonzero integers (+i for generator i,
-i for its inverse). Serialization is canonical (sorted keys, no spaces,
trailing newline) so equal objects produce byte-equal files. Schema
violations raise SchemaError carrying a JSON path like $.alice_gens[2][0].
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .aag import AagInstance, AagParams, AagPrivate, FreePlatform, Platform, RaagPlatform
from .errors import SchemaError
from .raag import CommutationGraph
from .subgroups import SubgroupGraph
from .words import Word

__all__ = [
    "word_to_json",
    "word_from_json",
    "words_to_json",
    "words_from_json",
    "platform_to_json",
    "platform_from_json",
    "parse_platform_spec",
    "params_to_json",
    "params_from_json",
    "instance_to_json",
    "instance_from_json",
    "private_to_json",
    "private_from_json",
    "system_to_json",
    "system_from_json",
    "subgroup_to_json",
    "subgroup_from_json",
    "graph_to_json",
    "commutation_graph_to_json",
    "commutation_graph_from_json",
    "attack_report_to_json",
    "dump_json",
    "load_json",
    "sha256_file",
    "build_manifest",
    "TOOL_VERSION",
]

TOOL_VERSION = __version__


# ---------------------------------------------------------------------------
# primitives


def _want(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaError(path, message)


def _get(obj: Any, key: str, path: str) -> Any:
    _want(isinstance(obj, dict), path, "expected an object")
    _want(key in obj, path, f"missing required key {key!r}")
    return obj[key]


def _int(x: Any, path: str) -> int:
    _want(isinstance(x, int) and not isinstance(x, bool), path, "expected an integer")
    return x


def word_to_json(w: Word) -> list[int]:
    return [int(t) for t in w.array]


def word_from_json(x: Any, path: str = "$") -> Word:
    _want(isinstance(x, list), path, "expected a word (array of signed integers)")
    letters = []
    for i, t in enumerate(x):
        v = _int(t, f"{path}[{i}]")
        _want(v != 0, f"{path}[{i}]", "letters are nonzero signed integers")
        letters.append(v)
    return Word(np.array(letters, dtype=np.int64))


def words_to_json(ws: Sequence[Word]) -> list[list[int]]:
    return [word_to_json(w) for w in ws]


def words_from_json(x: Any, path: str = "$") -> tuple[Word, ...]:
    _want(isinstance(x, list), path, "expected an array of words")
    return tuple(word_from_json(w, f"{path}[{i}]") for i, w in enumerate(x))


# ---------------------------------------------------------------------------
# platforms


def platform_to_json(p: Platform) -> dict:
    if isinstance(p, FreePlatform):
        return {"kind": "free", "rank": p.rank}
    return {
        "kind": "raag",
        "n": p.graph.n,
        "edges": [[u, v] for u, v in p.graph.edge_list()],
    }


def platform_from_json(obj: Any, path: str = "$") -> Platform:
    kind = _get(obj, "kind", path)
    if kind == "free":
        rank = _int(_get(obj, "rank", path), f"{path}.rank")
        _want(rank >= 2, f"{path}.rank", "free platform needs rank >= 2")
        return FreePlatform(rank)
    if kind == "raag":
        n = _int(_get(obj, "n", path), f"{path}.n")
        edges_j = _get(obj, "edges", path)
        _want(isinstance(edges_j, list), f"{path}.edges", "expected an array")
        edges = []
        for i, e in enumerate(edges_j):
            epath = f"{path}.edges[{i}]"
            _want(isinstance(e, list) and len(e) == 2, epath, "expected [u, v]")
            edges.append((_int(e[0], f"{epath}[0]"), _int(e[1], f"{epath}[1]")))
        try:
            return RaagPlatform(CommutationGraph(n, edges))
        except ValueError as exc:
            raise SchemaError(f"{path}.edges", str(exc)) from exc
    raise SchemaError(f"{path}.kind", f"unknown platform kind {kind!r}")


def parse_platform_spec(spec: str) -> Platform:
    """Compact command-line platform syntax.

    free:<rank> | raag-path:<n> | raag:<n>:<u>-<v>[.<u>-<v>...]
    (commas also accepted between edges)"""
    parts = spec.split(":")
    try:
        if parts[0] == "free" and len(parts) == 2:
            return FreePlatform(int(parts[1]))
        if parts[0] == "raag-path" and len(parts) == 2:
            return RaagPlatform(CommutationGraph.path(int(parts[1])))
        if parts[0] == "raag" and len(parts) == 3:
            n = int(parts[1])
            edges = []
            if parts[2]:
                for tok in parts[2].replace(",", ".").split("."):
                    u, v = tok.split("-")
                    edges.append((int(u), int(v)))
            return RaagPlatform(CommutationGraph(n, edges))
    except (ValueError, IndexError) as exc:
        raise SchemaError("$.platform", f"bad platform spec {spec!r}: {exc}") from exc
    raise SchemaError(
        "$.platform",
        f"bad platform spec {spec!r}; use free:<rank>, raag-path:<n>, "
        f"or raag:<n>:<edges>",
    )


# ---------------------------------------------------------------------------
# protocol parameters and instances


def params_to_json(p: AagParams) -> dict:
    return {
        "alice_count": list(p.alice_count),
        "alice_length": list(p.alice_length),
        "bob_count": list(p.bob_count),
        "bob_length": list(p.bob_length),
        "key_factors": list(p.key_factors),
    }


def _range_from_json(x: Any, path: str) -> tuple[int, int]:
    if isinstance(x, int) and not isinstance(x, bool):
        return (x, x)
    _want(
        isinstance(x, list) and len(x) == 2,
        path,
        "expected an integer or [lo, hi]",
    )
    lo, hi = _int(x[0], f"{path}[0]"), _int(x[1], f"{path}[1]")
    _want(1 <= lo <= hi, path, f"bad range [{lo}, {hi}]")
    return (lo, hi)


def params_from_json(obj: Any, path: str = "$") -> AagParams:
    _want(isinstance(obj, dict), path, "expected an object")
    kwargs = {}
    for name in (
        "alice_count",
        "alice_length",
        "bob_count",
        "bob_length",
        "key_factors",
    ):
        if name in obj:
            kwargs[name] = _range_from_json(obj[name], f"{path}.{name}")
    unknown = set(obj) - set(AagParams.__dataclass_fields__)
    _want(not unknown, path, f"unknown parameter keys {sorted(unknown)}")
    return AagParams(**kwargs)


def instance_to_json(inst: AagInstance) -> dict:
    return {
        "platform": platform_to_json(inst.platform),
        "params": params_to_json(inst.params) if inst.params else None,
        "seed": inst.seed,
        "alice_gens": words_to_json(inst.alice_gens),
        "bob_gens": words_to_json(inst.bob_gens),
        "alice_conjugates": words_to_json(inst.alice_conjugates),
        "bob_conjugates": words_to_json(inst.bob_conjugates),
    }


def instance_from_json(obj: Any, path: str = "$") -> AagInstance:
    platform = platform_from_json(_get(obj, "platform", path), f"{path}.platform")
    params = None
    if obj.get("params") is not None:
        params = params_from_json(obj["params"], f"{path}.params")
    seed = obj.get("seed")
    if seed is not None:
        seed = _int(seed, f"{path}.seed")
    fields = {}
    for name in ("alice_gens", "bob_gens", "alice_conjugates", "bob_conjugates"):
        fields[name] = words_from_json(_get(obj, name, path), f"{path}.{name}")
    _want(
        len(fields["alice_conjugates"]) == len(fields["bob_gens"]),
        f"{path}.alice_conjugates",
        f"expected one conjugate per bob generator "
        f"({len(fields['bob_gens'])}), got {len(fields['alice_conjugates'])}",
    )
    _want(
        len(fields["bob_conjugates"]) == len(fields["alice_gens"]),
        f"{path}.bob_conjugates",
        f"expected one conjugate per alice generator "
        f"({len(fields['alice_gens'])}), got {len(fields['bob_conjugates'])}",
    )
    for name, ws in fields.items():
        for i, w in enumerate(ws):
            _want(
                w.max_generator() <= platform.rank,
                f"{path}.{name}[{i}]",
                f"letter outside platform rank {platform.rank}",
            )
    return AagInstance(platform=platform, params=params, seed=seed, **fields)


def _factors_to_json(factors: Sequence[int]) -> list[list[int]]:
    return [[abs(f), 1 if f > 0 else -1] for f in factors]


def _factors_from_json(x: Any, path: str) -> tuple[int, ...]:
    _want(isinstance(x, list), path, "expected an array of [index, sign] pairs")
    out = []
    for i, pair in enumerate(x):
        ppath = f"{path}[{i}]"
        _want(isinstance(pair, list) and len(pair) == 2, ppath, "expected [index, sign]")
        idx = _int(pair[0], f"{ppath}[0]")
        sign = _int(pair[1], f"{ppath}[1]")
        _want(idx >= 1, f"{ppath}[0]", "indices are 1-based")
        _want(sign in (1, -1), f"{ppath}[1]", "sign must be 1 or -1")
        out.append(sign * idx)
    return tuple(out)


def private_to_json(alice: AagPrivate, bob: AagPrivate) -> dict:
    return {
        "alice": _factors_to_json(alice.factors),
        "bob": _factors_to_json(bob.factors),
    }


def private_from_json(obj: Any, path: str = "$") -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Factor sequences (signed indices) for both parties; keys are
    reconstructed against an instance's generator tuples."""
    return (
        _factors_from_json(_get(obj, "alice", path), f"{path}.alice"),
        _factors_from_json(_get(obj, "bob", path), f"{path}.bob"),
    )


# ---------------------------------------------------------------------------
# conjugacy systems and subgroups


def system_to_json(pairs: Sequence[tuple[Word, Word]]) -> dict:
    return {"pairs": [[word_to_json(u), word_to_json(v)] for u, v in pairs]}


def system_from_json(obj: Any, path: str = "$") -> list[tuple[Word, Word]]:
    pairs_j = _get(obj, "pairs", path)
    _want(isinstance(pairs_j, list), f"{path}.pairs", "expected an array")
    _want(len(pairs_j) >= 1, f"{path}.pairs", "system must have at least one pair")
    pairs = []
    for i, p in enumerate(pairs_j):
        ppath = f"{path}.pairs[{i}]"
        _want(isinstance(p, list) and len(p) == 2, ppath, "expected [u, v]")
        pairs.append(
            (word_from_json(p[0], f"{ppath}[0]"), word_from_json(p[1], f"{ppath}[1]"))
        )
    return pairs


def subgroup_to_json(rank: int, generators: Sequence[Word]) -> dict:
    return {"rank": rank, "generators": words_to_json(generators)}


def subgroup_from_json(obj: Any, path: str = "$") -> tuple[int, tuple[Word, ...]]:
    rank = _int(_get(obj, "rank", path), f"{path}.rank")
    _want(rank >= 1, f"{path}.rank", "rank must be >= 1")
    gens = words_from_json(_get(obj, "generators", path), f"{path}.generators")
    for i, g in enumerate(gens):
        _want(
            g.max_generator() <= rank,
            f"{path}.generators[{i}]",
            f"letter outside rank {rank}",
        )
    return rank, gens


def graph_to_json(g: SubgroupGraph) -> dict:
    """Folded-graph export: base is vertex 0, inverse edges implicit."""
    edges = []
    n, width = g.trans.shape
    for v in range(n):
        for lab in range(1, width // 2 + 1):
            dst = int(g.trans[v, 2 * (lab - 1)])
            if dst >= 0:
                edges.append([v, dst, lab])
    return {"vertices": n, "base": 0, "edges": edges}


def commutation_graph_to_json(g: CommutationGraph) -> dict:
    return {"n": g.n, "edges": [[u, v] for u, v in g.edge_list()]}


def commutation_graph_from_json(obj: Any, path: str = "$") -> CommutationGraph:
    n = _int(_get(obj, "n", path), f"{path}.n")
    edges_j = _get(obj, "edges", path)
    _want(isinstance(edges_j, list), f"{path}.edges", "expected an array")
    edges = []
    for i, e in enumerate(edges_j):
        epath = f"{path}.edges[{i}]"
        _want(isinstance(e, list) and len(e) == 2, epath, "expected [u, v]")
        edges.append((_int(e[0], f"{epath}[0]"), _int(e[1], f"{epath}[1]")))
    try:
        return CommutationGraph(n, edges)
    except ValueError as exc:
        raise SchemaError(f"{path}.edges", str(exc)) from exc


# ---------------------------------------------------------------------------
# reports and manifests


def attack_report_to_json(report, instance_ref: str) -> dict:
    if report.success:
        outcome = "success"
    else:
        side = report.alice if not report.alice.success else report.bob
        outcome = f"failure:{side.reason}"
    return {
        "instance_ref": instance_ref,
        "attack": report.attack,
        "outcome": outcome,
        "steps": report.alice.steps + report.bob.steps,
        "wall_time_ms": report.elapsed_ms,
        "verified": report.success,
    }


def dump_json(path, obj) -> None:
    """Canonical JSON: sorted keys, compact separators, trailing newline."""
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON in {path}: {exc}") from exc


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()


def build_manifest(
    command: str,
    config: dict,
    seed: Optional[int],
    inputs: dict[str, str],
    outputs: dict[str, str],
) -> dict:
    """Everything needed to replay a run: the command, its full config,
    the seed, the tool version, and digests of all files touched.
    `inputs` and `outputs` map file paths to their sha256 hex digests."""
    return {
        "command": command,
        "config": config,
        "seed": seed,
        "tool_version": TOOL_VERSION,
        "inputs": inputs,
        "outputs": outputs,
    }
