"""Reproducible batches: generate maps, check and globalize each, aggregate."""
from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, carriers
from .engine import DEFAULT_BUDGET, PointSet, exhaustive_size
from .globalize import reconstruct_and_verify
from .io import InputError, load_map
from .jordan import (check_local_inner_jordan, map_from_skew, random_jordan_patched, random_skew,
                     reconstruct_jordan)
from .localcheck import AdditiveMap, check_local_inner, map_from_inner, random_basis_patched, random_matrix
from .scalars import RingError, RingSpec, parse_ring, ring_make

GENERATORS = ("inner-random", "basis-patched-random", "explicit-files")


@dataclass
class GeneratorSpec:
    kind: str
    count: int = 0
    paths: list[str] = field(default_factory=list)


@dataclass
class CampaignConfig:
    ring: RingSpec
    n: int
    algebra: str = "full"
    mode: str = "sampled"
    samples: int = 1000
    seed: int = 0
    generators: list[GeneratorSpec] = field(default_factory=list)
    output: str | None = None
    budget: int = DEFAULT_BUDGET
    base_dir: Path = Path(".")

    def __post_init__(self):
        self.algebra = carriers.normalize_carrier(self.algebra)
        if self.n < 1:
            raise InputError("n must be positive")
        if self.mode not in ("exhaustive", "sampled"):
            raise InputError(f"unknown mode {self.mode!r}")
        if self.samples < 0:
            raise InputError("samples must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if self.mode == "exhaustive":
            ring = ring_make(self.ring)
            if not ring.is_finite or exhaustive_size(ring, self.n, self.algebra) > self.budget:
                raise InputError("exhaustive mode exceeds the point budget; use sampled")
        for g in self.generators:
            if g.kind not in GENERATORS:
                raise InputError(f"unknown generator {g.kind!r}")
            if g.count < 0:
                raise InputError("generator count must be non-negative")

    @classmethod
    def from_json(cls, d: dict, base_dir: Path | str = ".") -> "CampaignConfig":
        if not isinstance(d, dict):
            raise InputError("campaign config must be a JSON object")
        try:
            r = d["ring"]
            spec = parse_ring(r) if isinstance(r, str) else RingSpec.from_json(r)
            ring_make(spec)
            gens = [GeneratorSpec(g["kind"], int(g.get("count", 0)), list(g.get("paths", [])))
                    for g in d.get("generators", [])]
            return cls(spec, int(d["n"]), d.get("algebra", "full"), d.get("mode", "sampled"),
                       int(d.get("samples", 1000)), int(d.get("seed", 0)), gens, d.get("output"),
                       int(d.get("budget", DEFAULT_BUDGET)), Path(base_dir))
        except InputError:
            raise
        except (KeyError, TypeError, ValueError, RingError) as exc:
            raise InputError(f"bad campaign config: {exc}") from exc

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "n": self.n, "algebra": self.algebra, "mode": self.mode,
                "samples": self.samples, "seed": self.seed, "budget": self.budget,
                "generators": [{"kind": g.kind, "count": g.count, "paths": g.paths} for g in self.generators]}

    def points(self) -> PointSet:
        return PointSet.exhaustive() if self.mode == "exhaustive" else PointSet.sampled(self.samples, self.seed)


def generate(cfg: CampaignConfig) -> list[tuple[str, AdditiveMap]]:
    ring = ring_make(cfg.ring)
    rng = random.Random(cfg.seed)
    jordan = cfg.algebra == "jordan"
    out = []
    for g in cfg.generators:
        if g.kind == "inner-random":
            for _ in range(g.count):
                f = map_from_skew(random_skew(ring, cfg.n, rng)) if jordan else \
                    map_from_inner(random_matrix(ring, cfg.n, rng))
                out.append((g.kind, f))
        elif g.kind == "basis-patched-random":
            for _ in range(g.count):
                f = random_jordan_patched(ring, cfg.n, rng) if jordan else random_basis_patched(ring, cfg.n, rng)
                out.append((g.kind, f))
        else:
            for p in g.paths:
                f = load_map(cfg.base_dir / p)
                if f.ring != ring or f.n != cfg.n or f.carrier != cfg.algebra:
                    raise InputError(f"{p} does not match the campaign ring, n or algebra")
                out.append((g.kind, f))
    return out


def process_map(f: AdditiveMap, pts: PointSet, budget: int) -> dict:
    t0 = time.perf_counter()
    if f.carrier == "full":
        v = check_local_inner(f, pts, budget)
        res = {"verdict": v.to_json()}
        if v.accepted:
            res["globalize"] = reconstruct_and_verify(f, pts).to_json()
    else:
        v = check_local_inner_jordan(f, pts, budget)
        res = {"verdict": v.to_json()}
        if v.accepted:
            res["globalize"] = reconstruct_jordan(f)
    res["seconds"] = round(time.perf_counter() - t0, 4)
    return res


def _process(args):
    return process_map(*args)


def worker_count(flag: int | None = None) -> int:
    env = os.environ.get("DERIVLAB_WORKERS")
    if env:
        return max(1, int(env))
    if flag:
        return max(1, flag)
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


def parallel_map(fn, items: list, workers: int) -> list:
    """Ordered map over ``items``; a process pool when ``workers`` > 1."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def run_campaign(cfg: CampaignConfig, workers: int = 1) -> dict:
    t0 = time.perf_counter()
    maps = generate(cfg)
    pts = cfg.points()
    results = parallel_map(_process, [(f, pts, cfg.budget) for _, f in maps], workers)
    per_map = []
    agg: dict[str, dict] = {}
    for i, ((kind, _), r) in enumerate(zip(maps, results)):
        per_map.append({"index": i, "generator": kind, **r})
        a = agg.setdefault(kind, {"maps": 0, "accepted": 0, "rejected": 0, "globalized": 0})
        a["maps"] += 1
        if r["verdict"]["outcome"] == "reject":
            a["rejected"] += 1
        else:
            a["accepted"] += 1
            if r.get("globalize", {}).get("status") == "success":
                a["globalized"] += 1
    return {"tool": "derivlab", "version": __version__, "seed": cfg.seed, "config": cfg.to_json(),
            "results": per_map, "aggregate": agg, "seconds": round(time.perf_counter() - t0, 3)}


def strip_timings(report):
    """Copy of a report with every timing field removed (for reproducibility checks)."""
    if isinstance(report, dict):
        return {k: strip_timings(v) for k, v in report.items() if k != "seconds"}
    if isinstance(report, list):
        return [strip_timings(v) for v in report]
    return report

