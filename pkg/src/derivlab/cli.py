"""Command line front end.

Exit codes: 0 accept/success, 1 reject/unsolvable, 2 input error or budget exceeded.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import __version__
from .campaign import CampaignConfig, run_campaign, worker_count
from .engine import BudgetExceeded, PointSet
from .globalize import reconstruct_and_verify
from .io import InputError, dumps, load_json, load_map, save_map
from .jordan import (check_local_inner_jordan, map_from_skew, random_jordan_patched, random_skew,
                     reconstruct_jordan)
from .localcheck import check_local_inner, map_from_inner, random_basis_patched, random_matrix
from .scalars import RingError, ring_make
from .scan import scan

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2


def _emit(obj, out: str | None = None) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _points(args) -> PointSet | None:
    if args.exhaustive:
        return PointSet.exhaustive()
    if args.samples is not None:
        return PointSet.sampled(args.samples, args.seed)
    return None


def cmd_check(args) -> int:
    f = load_map(args.map)
    pts = _points(args)
    if f.carrier == "full":
        v = check_local_inner(f, pts)
    else:
        v = check_local_inner_jordan(f, pts)
    d = v.to_json()
    if f.carrier == "jordan":
        d["product"] = v.stats["product"]
    _emit(d, args.out)
    return EXIT_OK if v.accepted else EXIT_NO


def cmd_globalize(args) -> int:
    f = load_map(args.map)
    if f.carrier == "full":
        rep = reconstruct_and_verify(f).to_json()
    else:
        rep = reconstruct_jordan(f)
    _emit(rep, args.out)
    return EXIT_OK if rep["status"] == "success" else EXIT_NO


def cmd_scan(args) -> int:
    ring = ring_make(args.ring)
    if not ring.is_finite:
        raise InputError(f"{ring.spec} is infinite; a total scan needs a finite ring")
    res = scan(ring, args.n, args.algebra)
    _emit(res.to_json(), args.out)
    return EXIT_OK if res.equalities_hold else EXIT_NO


def cmd_campaign(args) -> int:
    path = Path(args.config)
    cfg = CampaignConfig.from_json(load_json(path), path.parent)
    report = run_campaign(cfg, worker_count(args.workers))
    out = args.out or (str(path.parent / cfg.output) if cfg.output else None)
    _emit(report, out)
    return EXIT_OK


def cmd_gen(args) -> int:
    ring = ring_make(args.ring)
    rng = random.Random(args.seed)
    jordan = args.algebra == "jordan"
    if args.kind == "inner":
        f = map_from_skew(random_skew(ring, args.n, rng)) if jordan else map_from_inner(random_matrix(ring, args.n, rng))
    else:
        f = random_jordan_patched(ring, args.n, rng) if jordan else random_basis_patched(ring, args.n, rng)
    save_map(f, args.out, {"generator": args.kind, "seed": args.seed})
    print(args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="derivlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"derivlab {__version__}")
    ap.add_argument("--workers", type=int, default=None,
                    help="worker processes (DERIVLAB_WORKERS overrides)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide local innerness of a map file")
    p.add_argument("--map", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("globalize", help="recover one implementer for a map file")
    p.add_argument("--map", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_globalize)

    p = sub.add_parser("scan", help="enumerate every linear self-map of a small algebra")
    p.add_argument("--ring", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--algebra", choices=["full", "jordan"], default="full")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("campaign", help="run a reproducible batch from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_campaign)

    p = sub.add_parser("gen", help="write a random map file")
    p.add_argument("kind", choices=["inner", "patched"])
    p.add_argument("--ring", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algebra", choices=["full", "jordan"], default="full")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_gen)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, RingError, BudgetExceeded, ValueError) as exc:
        print(f"derivlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
