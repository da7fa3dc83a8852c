"""Command-line front end.

Subcommands: keygen, attack, solve, experiment, rerun. Every run writes a
manifest next to its primary output (<out>.manifest.json) recording the
exact argv, seed, tool version, and sha256 digests of all files read and
written; `rerun` replays a manifest and reports digest matches. Exit codes:
0 success, 1 attack/solve found nothing (a correct negative), 2 invalid
input. Timing fields are zero unless --record-timing is given, so default
outputs are byte-reproducible.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Optional

from . import fileio as fio
from .aag import AagParams, keygen
from .attacks import run_attack
from .conjugacy import solve_system_in_subgroup
from .errors import SchemaError
from .lab import (
    ExperimentConfig,
    attack_success_sweep,
    density_rows,
    estimate_density,
    write_csv,
)
from .subgroups import SubgroupGraph
from .words import make_rng

__all__ = ["main"]


def _write_manifest(out_path: str, command: str, argv: list[str],
                    seed: Optional[int], inputs: list[str], outputs: list[str]) -> str:
    manifest = fio.build_manifest(
        command=command,
        config={"argv": argv},
        seed=seed,
        inputs={p: fio.sha256_file(p) for p in inputs},
        outputs={p: fio.sha256_file(p) for p in outputs},
    )
    mpath = out_path + ".manifest.json"
    fio.dump_json(mpath, manifest)
    return mpath


def _load_params(spec: Optional[str]) -> AagParams:
    if spec is None:
        return AagParams()
    if spec.startswith("@"):
        obj = fio.load_json(spec[1:])
    else:
        import json

        try:
            obj = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SchemaError("$.params", f"invalid JSON: {exc}") from exc
    return fio.params_from_json(obj, "$.params")


# ---------------------------------------------------------------------------
# subcommands


def cmd_keygen(args, argv: list[str]) -> int:
    platform = fio.parse_platform_spec(args.platform)
    params = _load_params(args.params)
    rng = make_rng(args.seed)
    inst, alice, bob = keygen(platform, params, rng, seed=args.seed)
    private_out = args.private_out or args.out + ".private.json"
    fio.dump_json(args.out, fio.instance_to_json(inst))
    fio.dump_json(private_out, fio.private_to_json(alice, bob))
    _write_manifest(args.out, "keygen", argv, args.seed, [], [args.out, private_out])
    return 0


def cmd_attack(args, argv: list[str]) -> int:
    inst = fio.instance_from_json(fio.load_json(args.instance))
    kwargs = {}
    if args.attack == "lba":
        kwargs["objective"] = args.objective
        if args.max_iters is not None:
            kwargs["max_iters"] = args.max_iters
    t0 = time.perf_counter()
    report = run_attack(inst, args.attack, **kwargs)
    elapsed = (time.perf_counter() - t0) * 1000.0
    doc = fio.attack_report_to_json(report, instance_ref=args.instance)
    doc["wall_time_ms"] = elapsed if args.record_timing else 0.0
    fio.dump_json(args.out, doc)
    _write_manifest(
        args.out, "attack", argv, inst.seed, [args.instance], [args.out]
    )
    return 0 if report.success else 1


def cmd_solve(args, argv: list[str]) -> int:
    pairs = fio.system_from_json(fio.load_json(args.system))
    rank, gens = fio.subgroup_from_json(fio.load_json(args.subgroup))
    for i, (u, v) in enumerate(pairs):
        for j, w in enumerate((u, v)):
            if w.max_generator() > rank:
                raise SchemaError(
                    f"$.pairs[{i}][{j}]", f"letter outside subgroup rank {rank}"
                )
    graph = SubgroupGraph(rank, list(gens))
    got = solve_system_in_subgroup(pairs, graph)
    doc = {
        "system_ref": args.system,
        "subgroup_ref": args.subgroup,
        "found": got is not None,
        "solution": fio.word_to_json(got[0]) if got else None,
        "expression": fio.word_to_json(got[1]) if got else None,
    }
    fio.dump_json(args.out, doc)
    _write_manifest(
        args.out, "solve", argv, None, [args.system, args.subgroup], [args.out]
    )
    return 0 if got is not None else 1


def _experiment_rows(cfg_obj: dict, workers: Optional[int]):
    kind = cfg_obj.get("kind")
    if kind == "density":
        platform = _platform_from_config(cfg_obj)
        try:
            cfg = ExperimentConfig(
                property_id=_req(cfg_obj, "property"),
                platform=platform,
                k=_req(cfg_obj, "k"),
                grid=tuple(_req(cfg_obj, "grid")),
                trials=_req(cfg_obj, "trials"),
                seed=_req(cfg_obj, "seed"),
                sampling_mode=cfg_obj.get("sampling_mode", "sphere"),
                experiment_id=cfg_obj.get("experiment_id", "density"),
                record_timing=bool(cfg_obj.get("record_timing", False)),
                workers=workers if workers is not None else cfg_obj.get("workers", 1),
            )
        except ValueError as exc:
            raise SchemaError("$", str(exc)) from exc
        return density_rows(cfg, estimate_density(cfg))
    if kind == "sweep":
        platform = _platform_from_config(cfg_obj)
        grid = [(int(k), int(length)) for k, length in _req(cfg_obj, "grid")]
        try:
            return attack_success_sweep(
                attack=_req(cfg_obj, "attack"),
                platform=platform,
                grid=grid,
                trials=_req(cfg_obj, "trials"),
                seed=_req(cfg_obj, "seed"),
                key_factors=_key_factors(cfg_obj),
                options=cfg_obj.get("options", {}),
                experiment_id=cfg_obj.get("experiment_id"),
                record_timing=bool(cfg_obj.get("record_timing", False)),
                workers=workers if workers is not None else cfg_obj.get("workers", 1),
            )
        except ValueError as exc:
            raise SchemaError("$", str(exc)) from exc
    raise SchemaError("$.kind", f"unknown experiment kind {kind!r}")


def _req(obj: dict, key: str):
    if key not in obj:
        raise SchemaError(f"$.{key}", "missing required key")
    return obj[key]


def _key_factors(obj: dict):
    kf = obj.get("key_factors", [5, 10])
    if isinstance(kf, list):
        return tuple(kf)
    return kf


def _platform_from_config(obj: dict):
    spec = _req(obj, "platform")
    if isinstance(spec, str):
        return fio.parse_platform_spec(spec)
    return fio.platform_from_json(spec, "$.platform")


def cmd_experiment(args, argv: list[str]) -> int:
    cfg_obj = fio.load_json(args.config)
    if not isinstance(cfg_obj, dict):
        raise SchemaError("$", "expected a config object")
    rows = _experiment_rows(cfg_obj, args.workers)
    write_csv(rows, args.out)
    _write_manifest(
        args.out, "experiment", argv, cfg_obj.get("seed"), [args.config], [args.out]
    )
    return 0


def cmd_rerun(args, _argv: list[str]) -> int:
    manifest = fio.load_json(args.manifest)
    config = manifest.get("config") or {}
    recorded_argv = config.get("argv")
    if not isinstance(recorded_argv, list) or not recorded_argv:
        raise SchemaError("$.config.argv", "manifest does not carry a replayable argv")
    for path, digest in (manifest.get("inputs") or {}).items():
        if os.path.exists(path) and fio.sha256_file(path) != digest:
            print(f"warning: input {path} changed since the recorded run", file=sys.stderr)
    new_argv = list(recorded_argv)
    if args.out_dir:
        for i, tok in enumerate(new_argv):
            if tok in ("--out", "--private-out") and i + 1 < len(new_argv):
                new_argv[i + 1] = os.path.join(
                    args.out_dir, os.path.basename(new_argv[i + 1])
                )
    code = main(new_argv)
    if code == 2:
        return 2
    ok = True
    for path, digest in (manifest.get("outputs") or {}).items():
        new_path = (
            os.path.join(args.out_dir, os.path.basename(path)) if args.out_dir else path
        )
        got = fio.sha256_file(new_path)
        match = got == digest
        ok = ok and match
        print(f"{'match' if match else 'MISMATCH'}: {new_path}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aaglab",
        description="Key-exchange simulation, conjugacy solvers, attacks, "
        "and Monte-Carlo experiments over free and graph-group platforms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="sample an instance and its private keys")
    kg.add_argument("--platform", required=True,
                    help="free:<rank> | raag-path:<n> | raag:<n>:<edges>")
    kg.add_argument("--params", default=None,
                    help="inline JSON or @file with instance size ranges")
    kg.add_argument("--seed", type=int, required=True)
    kg.add_argument("--out", required=True, help="instance JSON path")
    kg.add_argument("--private-out", default=None,
                    help="private-key JSON path (default: <out>.private.json)")
    kg.set_defaults(func=cmd_keygen)

    at = sub.add_parser("attack", help="run an attack on an instance file")
    at.add_argument("--instance", required=True)
    at.add_argument("--attack", required=True, choices=["lba", "qa"])
    at.add_argument("--objective", default="ambient",
                    choices=["ambient", "inner", "projected"])
    at.add_argument("--max-iters", type=int, default=None)
    at.add_argument("--record-timing", action="store_true",
                    help="include wall time in the report (not reproducible)")
    at.add_argument("--out", required=True, help="attack report JSON path")
    at.set_defaults(func=cmd_attack)

    sv = sub.add_parser("solve", help="exact subgroup-constrained conjugacy solve")
    sv.add_argument("--system", required=True, help="conjugacy system JSON path")
    sv.add_argument("--subgroup", required=True, help="subgroup JSON path")
    sv.add_argument("--out", required=True, help="solution report JSON path")
    sv.set_defaults(func=cmd_solve)

    ex = sub.add_parser("experiment", help="run a density or sweep experiment")
    ex.add_argument("--config", required=True, help="experiment config JSON path")
    ex.add_argument("--workers", type=int, default=None,
                    help="override the config's worker count")
    ex.add_argument("--out", required=True, help="CSV output path")
    ex.set_defaults(func=cmd_experiment)

    rr = sub.add_parser("rerun", help="replay a run from its manifest")
    rr.add_argument("--manifest", required=True)
    rr.add_argument("--out-dir", default=None,
                    help="redirect outputs into this directory")
    rr.set_defaults(func=cmd_rerun)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, list(argv))
    except SchemaError as exc:
        print(f"error at {exc.path}: {exc.message}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
