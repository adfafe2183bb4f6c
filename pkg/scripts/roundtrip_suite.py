"""Round trips: random implementer -> map -> check -> globalize, for chosen rings and sizes.

    python scripts/roundtrip_suite.py --rings "GF(3)" Q Z/6 --n 2 3 4 --count 50
    python scripts/roundtrip_suite.py --algebra jordan --rings Z/5 Z --n 2 3
"""
import argparse
import random
import time

from derivlab.derivations import inner_equal
from derivlab.globalize import globalize_direct, globalize_stitch
from derivlab.jordan import (check_local_inner_jordan, globalize_jordan, globalize_jordan_corners, map_from_skew,
                             product_mode, random_skew)
from derivlab.localcheck import check_local_inner, map_from_inner, random_matrix
from derivlab.scalars import ring_make


def full_trip(ring, n, rng):
    a = random_matrix(ring, n, rng)
    f = map_from_inner(a)
    v = check_local_inner(f)
    if not v.accepted:
        return v.outcome, False
    d, s = globalize_direct(f), globalize_stitch(f)
    return v.outcome, inner_equal(d, a) and inner_equal(s, a)


def jordan_trip(ring, n, rng):
    c = random_skew(ring, n, rng)
    f = map_from_skew(c)
    v = check_local_inner_jordan(f)
    if not v.accepted:
        return v.outcome, False
    return v.outcome, globalize_jordan(f).c == c == globalize_jordan_corners(f).c


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rings", nargs="+", default=["GF(2)", "GF(3)", "GF(5)", "Q"])
    ap.add_argument("--n", nargs="+", type=int, default=[2, 3])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--algebra", choices=["full", "jordan"], default="full")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    trip = full_trip if args.algebra == "full" else jordan_trip
    failures = 0
    for spec in args.rings:
        ring = ring_make(spec)
        for n in args.n:
            rng = random.Random(f"{args.seed} {spec} {n}")
            t0 = time.perf_counter()
            outcomes, ok = {}, 0
            for _ in range(args.count):
                outcome, good = trip(ring, n, rng)
                outcomes[outcome] = outcomes.get(outcome, 0) + 1
                ok += good
            failures += args.count - ok
            extra = f" product={product_mode(ring)}" if args.algebra == "jordan" else ""
            print(f"{spec:6} n={n}  recovered {ok}/{args.count}  {outcomes}{extra}  "
                  f"{time.perf_counter() - t0:.1f}s")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
