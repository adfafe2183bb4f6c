"""Homogeneity of accepted maps over GF(4), where additive no longer means linear.

Builds inner maps and strictly additive look-alikes on M_2(GF(4)) and
H_2(GF(4)), runs the exhaustive checker, and tests f(lam e) = lam f(e) on
every accepted map.  Prints the first non-homogeneous accepted map found.
"""
import argparse
import random

from derivlab import carriers
from derivlab.derivations import inner_apply
from derivlab.jordan import check_local_inner_jordan
from derivlab.localcheck import check_local_inner, map_from_basis_images, random_matrix
from derivlab.scalars import ring_make


def candidates(r, n, carrier, rng, count):
    B = carriers.basis(r, n, carrier)
    t = r.generator_powers()[1]
    if carrier == "full":
        impl = lambda: random_matrix(r, n, rng)
    else:
        impl = lambda: carriers.skew_from_coords(r, n, [r.random(rng) for _ in carriers.skew_positions(n)])
    for _ in range(count):
        a, b = impl(), impl()
        yield "inner", map_from_basis_images(r, n, [inner_apply(a, x) for x in B], carrier)
        yield "split", map_from_basis_images(
            r, n, [img for x in B for img in (inner_apply(a, x), inner_apply(b, x.scale(t)))], carrier)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    r = ring_make("GF(4)")
    for carrier, check in (("full", check_local_inner), ("jordan", check_local_inner_jordan)):
        rng = random.Random(args.seed)
        B = carriers.basis(r, args.n, carrier)
        acc, bad, shown = 0, 0, False
        for kind, f in candidates(r, args.n, carrier, rng, args.count):
            if not check(f).accepted:
                continue
            acc += 1
            off = [(b, lam) for b in B for lam in r.elements() if f(b.scale(lam)) != f(b).scale(lam)]
            if off:
                bad += 1
                if not shown:
                    b, lam = off[0]
                    print(f"  {carrier}: accepted {kind} map with f({r.format(lam)} * {b.to_json()['rows']}) "
                          f"= {f(b.scale(lam)).to_json()['rows']} but {r.format(lam)} * f(e) = "
                          f"{f(b).scale(lam).to_json()['rows']}")
                    shown = True
        print(f"{carrier:6} n={args.n}: {acc} accepted, {bad} not homogeneous")


if __name__ == "__main__":
    main()
