"""Exhaustive scans of every small algebra that fits the default budget.

Writes one JSON report per scan into --out (default: scan_results/) and a
one-line summary per scan to stdout.
"""
import argparse
import json
from pathlib import Path

from derivlab.engine import BudgetExceeded
from derivlab.scalars import ring_make
from derivlab.scan import scan

SCANS = [
    ("GF(2)", 1, "full"), ("GF(3)", 1, "full"), ("GF(2)", 2, "full"),
    ("GF(2)", 2, "jordan"), ("GF(3)", 2, "jordan"), ("Z/4", 2, "jordan"),
    ("GF(5)", 1, "full"), ("GF(4)", 1, "full"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="scan_results")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for spec, n, algebra in SCANS:
        try:
            res = scan(ring_make(spec), n, algebra)
        except BudgetExceeded as exc:
            print(f"{spec:6} n={n} {algebra:6}  skipped: {exc}")
            continue
        d = res.to_json()
        name = f"{spec.replace('/', '_').replace('(', '').replace(')', '')}_n{n}_{algebra}.json"
        (out / name).write_text(json.dumps(d, indent=2, sort_keys=True) + "\n")
        print(f"{spec:6} n={n} {algebra:6}  maps={d['maps_scanned']:>7}  local_inner={d['local_inner_count']:>3}  "
              f"inner={d['inner_count']:>3}  derivations={d['derivation_count']:>3}  "
              f"equal={d['local_inner_equals_inner']}  {d['seconds']:.2f}s")


if __name__ == "__main__":
    main()
