"""Turn a local inner derivation of M_n(R) into one global implementer.

Two independent routes:

* :func:`globalize_direct` solves the n^2 unit constraints in one system.
* :func:`globalize_stitch` follows the superdiagonal induction: pin
  e_12, e_23 jointly, then add e_{k,k+1} one at a time by patching the
  current implementer with a pair witness c(k,k+1), fix the remaining
  e_{1,n} freedom from the point e_{n,1}, and verify every unit.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .derivations import canonicalize, inner_apply, inner_equal, joint_solve
from .engine import PointSet, point_bank
from .localcheck import (AdditiveMap, InternalFault, apply_map, default_points,
                         is_derivation, map_from_inner)
from .matrices import Matrix, unit


class NotLocalInner(ValueError):
    """A constraint set that every local inner derivation satisfies has no solution."""

    def __init__(self, stage: str, violation: dict | None = None):
        super().__init__(f"{stage}: {violation}")
        self.stage = stage
        self.violation = violation or {}


def _unit_images(f: AdditiveMap):
    n = f.n
    return {(i, j): apply_map(f, unit(f.ring, n, i, j))
            for i in range(1, n + 1) for j in range(1, n + 1)}


def _require_full(f: AdditiveMap) -> None:
    if f.carrier != "full":
        raise ValueError("globalization of Jordan maps lives in derivlab.jordan")


def globalize_direct(f: AdditiveMap) -> Matrix:
    """Canonical a with ax - xa = f(x) on every matrix unit."""
    _require_full(f)
    n = f.n
    imgs = _unit_images(f)
    sol = joint_solve([(unit(f.ring, n, i, j), y) for (i, j), y in imgs.items()])
    if not sol.solvable:
        raise NotLocalInner("direct", {"constraints": "all matrix units"})
    return canonicalize(sol.particular_matrix(n))


@dataclass
class StitchState:
    k: int
    current: Matrix
    pair_witnesses: dict = field(default_factory=dict)


def _patch(a: Matrix, c: Matrix, k: int) -> Matrix:
    """Extend agreement from e_{i,i+1} (i < k) to i = k (k is 1-based).

    Entries outside the lower-right block keep a's values, the block rows
    and columns k+1.. take c's, and the new diagonal entry is shifted so
    that b_kk - b_{k+1,k+1} = c_kk - c_{k+1,k+1}.  Column k and the left
    part of row k+1 are the entries D_b(e_{k,k+1}) reads; they are taken
    from c, where a local inner derivation forces them to coincide with a's
    already pinned values.
    """
    n = a.n
    ring = a.ring
    K, K1 = k - 1, k
    upd = {}
    for i in range(K1, n):
        for j in range(K1, n):
            if (i, j) != (K1, K1):
                upd[(i, j)] = c[i, j]
    upd[(K1, K1)] = ring.add(ring.sub(c[K1, K1], c[K, K]), a[K, K])
    for j in range(K):
        upd[(K1, j)] = c[K1, j]
    for i in range(n):
        if i != K:
            upd[(i, K)] = c[i, K]
    return a.replace(upd)


def globalize_stitch(f: AdditiveMap, trace: list | None = None) -> Matrix:
    """Superdiagonal induction; raises :class:`NotLocalInner` naming the stage."""
    _require_full(f)
    ring, n = f.ring, f.n
    imgs = _unit_images(f)

    def E(i, j):
        return unit(ring, n, i, j)

    def pinned(a, upto, stage):
        for i in range(1, upto + 1):
            got = inner_apply(a, E(i, i + 1))
            if got != imgs[(i, i + 1)]:
                raise NotLocalInner(stage, {"unit": [i, i + 1],
                                            "expected": imgs[(i, i + 1)].to_json(),
                                            "got": got.to_json()})

    if n == 1:
        a = Matrix.zeros(ring, 1)
    else:
        base = [(E(1, 2), imgs[(1, 2)])]
        if n >= 3:
            base.append((E(2, 3), imgs[(2, 3)]))
        sol = joint_solve(base)
        if not sol.solvable:
            raise NotLocalInner("stitch:base", {"units": [[1, 2], [2, 3]][:len(base)]})
        a = sol.particular_matrix(n)
        state = StitchState(len(base), a)
        pinned(a, state.k, "stitch:base")
        if trace is not None:
            trace.append(StitchState(state.k, a, {}))
        for k in range(3, n):
            csol = joint_solve([(E(k - 1, k), imgs[(k - 1, k)]), (E(k, k + 1), imgs[(k, k + 1)])])
            if not csol.solvable:
                raise NotLocalInner(f"stitch:k={k}", {"units": [[k - 1, k], [k, k + 1]]})
            c = csol.particular_matrix(n)
            a = _patch(a, c, k)
            state.k = k
            state.current = a
            state.pair_witnesses[(k, k + 1)] = c
            pinned(a, k, f"stitch:k={k}")
            if trace is not None:
                trace.append(StitchState(k, a, dict(state.pair_witnesses)))
        # the superdiagonal fixes a up to t*e_{1,n} + center; e_{n,1} fixes t
        r = imgs[(n, 1)] - inner_apply(a, E(n, 1))
        a = a + E(1, n).scale(r[0, 0])
    for (i, j), y in imgs.items():
        got = inner_apply(a, E(i, j))
        if got != y:
            raise NotLocalInner("verify", {"unit": [i, j], "expected": y.to_json(), "got": got.to_json()})
    return canonicalize(a)


@dataclass
class Report:
    status: str
    implementer: Matrix | None = None
    paths_agree: bool | None = None
    points_verified: int = 0
    is_derivation: bool | None = None
    stage: str | None = None
    violation: dict | None = None

    def to_json(self) -> dict:
        if self.status == "success":
            return {"status": "success", "implementer": self.implementer.to_json(),
                    "paths_agree": self.paths_agree, "points_verified": self.points_verified,
                    "is_derivation": self.is_derivation}
        return {"status": "failure", "stage": self.stage, "violation": self.violation}


def verify_on_points(f: AdditiveMap, g: AdditiveMap, pts: PointSet) -> int:
    """Compare two maps pointwise on ``pts``; returns the number of points checked."""
    bank = point_bank(f.ring, f.n, f.carrier, pts)
    if bank.batch:
        same = (bank.images(f.action) == bank.images(g.action)).all(axis=1)
        bad = np.flatnonzero(~same)
        if len(bad):
            raise InternalFault(f"maps differ at {bank.matrix(int(bad[0]))}")
        return bank.size
    for i in range(bank.size):
        x = bank.matrix(i)
        if apply_map(f, x) != apply_map(g, x):
            raise InternalFault(f"maps differ at {x}")
    return bank.size


def reconstruct_and_verify(f: AdditiveMap, pts: PointSet | None = None) -> Report:
    """Both globalization paths, pointwise agreement, and the Leibniz rule."""
    _require_full(f)
    try:
        a = globalize_direct(f)
    except NotLocalInner as exc:
        return Report("failure", stage=exc.stage, violation=exc.violation)
    try:
        b = globalize_stitch(f)
    except NotLocalInner as exc:
        raise InternalFault(f"direct path succeeded but stitch failed at {exc.stage}") from exc
    if not inner_equal(a, b):
        raise InternalFault("globalization paths disagree beyond the center")
    g = map_from_inner(a)
    if g.action != f.action:
        # solvable on the units but not inner: find a point that shows it
        if pts is None:
            pts = default_points(f.ring, f.n, "full")
        bank = point_bank(f.ring, f.n, "full", pts)
        for i in range(bank.size):
            x = bank.matrix(i)
            if apply_map(f, x) != apply_map(g, x):
                return Report("failure", stage="verify",
                              violation={"point": x.to_json(), "expected": apply_map(f, x).to_json(),
                                         "got": apply_map(g, x).to_json()})
        return Report("failure", stage="verify", violation={"reason": "map differs from the implementer off the point set"})
    if pts is None:
        pts = default_points(f.ring, f.n, "full")
    checked = verify_on_points(f, g, pts)
    return Report("success", a, True, checked, is_derivation(f))
