"""Monte-Carlo lab: density estimates, attack success sweeps, distortion.

Every experiment is driven by a master seed; trial t of grid point p uses
an independent generator derived from (master seed, p, t), so results are
identical no matter how trials are scheduled across workers. CSV output is
deterministic byte-for-byte under the default configuration; per-trial
wall-clock timing is off by default because it is the one column that
cannot be reproducible.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Callable, Optional, Sequence, Union

from .aag import (
    AagParams,
    FreePlatform,
    Platform,
    RaagPlatform,
    commutator,
    evaluate_factors,
    keygen,
)
from .attacks import run_attack
from .errors import NotFreePlatform
from .raag import CommutationGraph, choose_projection, project
from .subgroups import SubgroupGraph, has_free_basis, quarter_condition
from .words import Word, make_rng, random_tuple

__all__ = [
    "DensityEstimate",
    "ExperimentConfig",
    "SweepRow",
    "DistortionEstimate",
    "PROPERTY_IDS",
    "estimate_density",
    "fb_density_via_quotient",
    "attack_success_sweep",
    "distortion_probe",
    "conjugation_growth_probe",
    "density_rows",
    "format_row",
    "write_csv",
    "CSV_HEADER",
]

# trials are dispatched to workers in fixed-size slices so that float
# accumulation associates identically for any worker count
_CHUNK = 128


# ---------------------------------------------------------------------------
# result types


@dataclass(frozen=True)
class DensityEstimate:
    """Point estimate of an event frequency at one ball radius."""

    radius: int
    trials: int
    successes: int
    rate: float
    ci_half_width: float  # 95% normal approximation
    unreliable: bool  # trials * min(rate, 1 - rate) < 10
    mean_ms: float = 0.0
    lower_bound: bool = False  # estimate bounds the target density from below


@dataclass(frozen=True)
class ExperimentConfig:
    """A density experiment: which property, over what tuples, how many."""

    property_id: str
    platform: Platform
    k: int
    grid: tuple[int, ...]  # tuple lengths / ball radii, one point each
    trials: int
    seed: int
    sampling_mode: str = "sphere"  # sphere | ball
    experiment_id: str = "density"
    record_timing: bool = False
    workers: int = 1

    def __post_init__(self):
        if not self.grid:
            raise ValueError("grid must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sampling_mode not in ("sphere", "ball"):
            raise ValueError(f"unknown sampling mode {self.sampling_mode!r}")


@dataclass(frozen=True)
class SweepRow:
    """One CSV row: a (grid point, experiment) summary."""

    experiment_id: str
    label: str  # property id or attack id
    platform: str
    k: int
    length: int
    trials: int
    successes: int
    rate: float
    ci_half_width: float
    mean_steps: float
    mean_ms: float
    seed: int
    sampling_mode: str


@dataclass(frozen=True)
class DistortionEstimate:
    """Inner-vs-ambient length comparison over a sampled subgroup."""

    samples: int
    max_ratio: float
    slope: float  # least-squares fit of inner length against ambient length


# ---------------------------------------------------------------------------
# properties


def _prop_always_true(platform: Platform, words: tuple[Word, ...]) -> bool:
    return True


def _prop_identity_tuple(platform: Platform, words: tuple[Word, ...]) -> bool:
    return all(w.is_identity for w in words)


def _prop_quarter(platform: Platform, words: tuple[Word, ...]) -> bool:
    return quarter_condition(list(words))


def _prop_free_basis(platform: Platform, words: tuple[Word, ...]) -> bool:
    return has_free_basis(list(words), rank=platform.rank)


def _prop_image_free_basis(platform: Platform, words: tuple[Word, ...]) -> bool:
    if not isinstance(platform, RaagPlatform):
        raise NotFreePlatform(
            "image-free-basis needs a RAAG platform to project from"
        )
    p, q = choose_projection(platform.graph)
    images = [project(platform.graph, w, p, q) for w in words]
    return has_free_basis(images, rank=2)


_PROPERTIES: dict[str, Callable[[Platform, tuple[Word, ...]], bool]] = {
    "always-true": _prop_always_true,
    "identity-tuple": _prop_identity_tuple,
    "quarter-condition": _prop_quarter,
    "free-basis": _prop_free_basis,
    "image-free-basis": _prop_image_free_basis,
}

PROPERTY_IDS = tuple(sorted(_PROPERTIES))


def _binomial_summary(trials: int, successes: int) -> tuple[float, float, bool]:
    rate = successes / trials
    ci = 1.96 * math.sqrt(rate * (1.0 - rate) / trials)
    unreliable = trials * min(rate, 1.0 - rate) < 10
    return rate, ci, unreliable


# ---------------------------------------------------------------------------
# density estimation


def _density_chunk(args) -> tuple[int, float]:
    cfg, point_index, lo, hi = args
    prop = _PROPERTIES[cfg.property_id]
    radius = cfg.grid[point_index]
    hits = 0
    ms = 0.0
    for t in range(lo, hi):
        rng = make_rng(cfg.seed, point_index, t)
        words = random_tuple(
            rng, cfg.platform.rank, cfg.k, radius, mode=cfg.sampling_mode
        )
        t0 = time.perf_counter() if cfg.record_timing else 0.0
        ok = prop(cfg.platform, words)
        if cfg.record_timing:
            ms += (time.perf_counter() - t0) * 1000.0
        if ok:
            hits += 1
    return hits, ms


def _run_chunks(fn, tasks, workers: int):
    if workers <= 1:
        return [fn(t) for t in tasks]
    ctx = get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as ex:
        return list(ex.map(fn, tasks))


def estimate_density(config: ExperimentConfig) -> list[DensityEstimate]:
    """Frequency of the configured property over random k-tuples, one
    estimate per grid radius. Unknown property ids raise ValueError."""
    if config.property_id not in _PROPERTIES:
        raise ValueError(
            f"unknown property {config.property_id!r}; known: {PROPERTY_IDS}"
        )
    out = []
    for pi, radius in enumerate(config.grid):
        tasks = [
            (config, pi, lo, min(lo + _CHUNK, config.trials))
            for lo in range(0, config.trials, _CHUNK)
        ]
        parts = _run_chunks(_density_chunk, tasks, config.workers)
        successes = sum(p[0] for p in parts)
        ms_total = sum(p[1] for p in parts)
        rate, ci, unreliable = _binomial_summary(config.trials, successes)
        out.append(
            DensityEstimate(
                radius=radius,
                trials=config.trials,
                successes=successes,
                rate=rate,
                ci_half_width=ci,
                unreliable=unreliable,
                mean_ms=ms_total / config.trials,
                lower_bound=config.property_id == "image-free-basis",
            )
        )
    return out


def fb_density_via_quotient(
    graph: CommutationGraph,
    k: int,
    grid: Sequence[int],
    trials: int,
    seed: int,
    **kwargs,
) -> list[DensityEstimate]:
    """Frequency of RAAG k-tuples whose rank-2 free images form a free
    basis. Each estimate is a lower bound for the free-basis density in the
    RAAG itself (a tuple is free whenever its image is), and is flagged as
    such. Raises GraphComplete when no free quotient exists."""
    choose_projection(graph)  # raises GraphComplete before any sampling
    cfg = ExperimentConfig(
        property_id="image-free-basis",
        platform=RaagPlatform(graph),
        k=k,
        grid=tuple(int(x) for x in grid),
        trials=trials,
        seed=seed,
        experiment_id=kwargs.pop("experiment_id", "fb-lower-bound"),
        **kwargs,
    )
    return estimate_density(cfg)


def density_rows(config: ExperimentConfig, estimates: Sequence[DensityEstimate]) -> list[SweepRow]:
    """CSV rows for a density experiment."""
    return [
        SweepRow(
            experiment_id=config.experiment_id,
            label=config.property_id,
            platform=config.platform.label(),
            k=config.k,
            length=e.radius,
            trials=e.trials,
            successes=e.successes,
            rate=e.rate,
            ci_half_width=e.ci_half_width,
            mean_steps=0.0,
            mean_ms=e.mean_ms,
            seed=config.seed,
            sampling_mode=config.sampling_mode,
        )
        for e in estimates
    ]


# ---------------------------------------------------------------------------
# attack sweeps


def _sweep_chunk(args) -> tuple[int, int, float]:
    (attack, platform, k, length, key_factors, options, seed, point_index,
     lo, hi, record_timing) = args
    params = AagParams(
        alice_count=k,
        alice_length=length,
        bob_count=k,
        bob_length=length,
        key_factors=key_factors,
    )
    hits = 0
    steps = 0
    ms = 0.0
    for t in range(lo, hi):
        rng = make_rng(seed, point_index, t)
        inst, apriv, bpriv = keygen(platform, params, rng)
        true_key = platform.normalize(commutator(apriv.key, bpriv.key))
        report = run_attack(inst, attack, **options)
        if report.success:
            # hard verification gate: a "successful" attack that produced a
            # wrong key is a soundness bug, not a data point
            if report.shared_key != true_key:
                raise AssertionError(
                    f"attack {attack} reported success with a wrong key "
                    f"(seed {seed}, point {point_index}, trial {t})"
                )
            hits += 1
        steps += report.alice.steps + report.bob.steps
        if record_timing:
            ms += report.elapsed_ms
    return hits, steps, ms


def attack_success_sweep(
    attack: str,
    platform: Platform,
    grid: Sequence[tuple[int, int]],
    trials: int,
    seed: int,
    key_factors: Union[int, tuple[int, int]] = (5, 10),
    options: Optional[dict] = None,
    experiment_id: Optional[str] = None,
    record_timing: bool = False,
    workers: int = 1,
) -> list[SweepRow]:
    """Success rate of one attack over a (k, L) grid of AAG instances.

    Each grid point runs `trials` seeded instances with k generators of
    length exactly L per party; reported successes are verified against
    the honest shared key, so a wrong key can never inflate the rate.
    """
    if attack not in ("lba", "qa", "quotient", "exact"):
        raise ValueError(f"unknown attack {attack!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    options = dict(options or {})
    if experiment_id is None:
        experiment_id = f"sweep-{attack}"
    rows = []
    for pi, (k, length) in enumerate(grid):
        tasks = [
            (attack, platform, int(k), int(length), key_factors, options,
             seed, pi, lo, min(lo + _CHUNK, trials), record_timing)
            for lo in range(0, trials, _CHUNK)
        ]
        parts = _run_chunks(_sweep_chunk, tasks, workers)
        successes = sum(p[0] for p in parts)
        steps_total = sum(p[1] for p in parts)
        ms_total = sum(p[2] for p in parts)
        rate, ci, _ = _binomial_summary(trials, successes)
        rows.append(
            SweepRow(
                experiment_id=experiment_id,
                label="qa" if attack == "quotient" else attack,
                platform=platform.label(),
                k=int(k),
                length=int(length),
                trials=trials,
                successes=successes,
                rate=rate,
                ci_half_width=ci,
                mean_steps=steps_total / trials,
                mean_ms=ms_total / trials,
                seed=seed,
                sampling_mode="sphere",
            )
        )
    return rows


# ---------------------------------------------------------------------------
# probes


def distortion_probe(
    gens: Sequence[Word],
    samples: int,
    max_factors: int,
    rng,
    platform: Optional[Platform] = None,
) -> DistortionEstimate:
    """Compare subgroup-internal length against ambient length on random
    products of the generators.

    Ratios near a constant indicate an undistorted (quasi-isometrically
    embedded) subgroup; the slope is the least-squares fit of inner length
    as a function of ambient length through the origin. Free platforms
    only."""
    if platform is not None and platform.kind != "free":
        raise NotFreePlatform("distortion probe runs on free platforms only")
    if samples < 1 or max_factors < 1:
        raise ValueError("samples and max_factors must be >= 1")
    gens = list(gens)
    rank = max([g.max_generator() for g in gens] + [1])
    graph = SubgroupGraph(rank, gens)
    n = len(gens)
    max_ratio = 0.0
    sxy = 0.0
    sxx = 0.0
    used = 0
    for _ in range(samples):
        count = int(rng.integers(1, max_factors + 1))
        factors = []
        for _ in range(count):
            i = int(rng.integers(1, n + 1))
            s = 1 if rng.integers(0, 2) else -1
            factors.append(s * i)
        w = evaluate_factors(gens, factors)
        if w.is_identity:
            continue
        inner = graph.basis_length(w)
        ambient = len(w)
        max_ratio = max(max_ratio, inner / ambient)
        sxy += ambient * inner
        sxx += ambient * ambient
        used += 1
    slope = sxy / sxx if sxx else 0.0
    return DistortionEstimate(samples=used, max_ratio=max_ratio, slope=slope)


def conjugation_growth_probe(
    rank: int, u_length: int, w_length: int, trials: int, seed: int
) -> DensityEstimate:
    """Frequency with which conjugation strictly lengthens a random word:
    |u^w| > |u| over independent uniform sphere samples. The length-based
    attack's plausibility rests on this being close to 1; the lab measures
    it instead of assuming it."""
    hits = 0
    for t in range(trials):
        rng = make_rng(seed, 0, t)
        u = random_tuple(rng, rank, 1, u_length)[0]
        w = random_tuple(rng, rank, 1, w_length)[0]
        if len(u.conjugated_by(w)) > len(u):
            hits += 1
    rate, ci, unreliable = _binomial_summary(trials, hits)
    return DensityEstimate(
        radius=u_length,
        trials=trials,
        successes=hits,
        rate=rate,
        ci_half_width=ci,
        unreliable=unreliable,
    )


# ---------------------------------------------------------------------------
# CSV


CSV_HEADER = (
    "experiment_id,property/attack,platform,k,L,trials,successes,"
    "rate,ci_half_width,mean_steps,mean_ms,seed,sampling_mode"
)


def format_row(r: SweepRow) -> str:
    return (
        f"{r.experiment_id},{r.label},{r.platform},{r.k},{r.length},"
        f"{r.trials},{r.successes},{r.rate:.6f},{r.ci_half_width:.6f},"
        f"{r.mean_steps:.3f},{r.mean_ms:.3f},{r.seed},{r.sampling_mode}"
    )


def write_csv(rows: Sequence[SweepRow], path) -> None:
    """Deterministic CSV: fixed header, fixed float formats, newline \\n."""
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(format_row(r) + "\n")
