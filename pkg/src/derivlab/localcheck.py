"""Additive maps on M_n(R) / H_n(R) and the local inner derivation checker.

An additive map is stored as a matrix over the prime ring (GF(p), Q, Z or
Z/m) acting on prime-ring coordinates; see :mod:`derivlab.carriers`.  Over
GF(p^k) this captures maps that are additive but not GF(p^k)-linear.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import carriers
from .derivations import inner_apply, sylvester_solve
from .engine import DEFAULT_BUDGET, PointSet, exhaustive_size, point_bank
from .matrices import Matrix, ShapeError
from .scalars import Ring, RingError


class InternalFault(RuntimeError):
    """Two independent routes disagreed; never expected on correct code."""


@dataclass(frozen=True)
class AdditiveMap:
    ring: Ring
    n: int
    carrier: str
    action: Matrix

    def __post_init__(self):
        D = carriers.dim(self.n, self.carrier) * self.ring.k
        if (self.action.n_rows, self.action.n_cols) != (D, D):
            raise ShapeError(f"action must be {D}x{D}")
        if self.action.ring != self.ring.prime_ring():
            raise RingError("action must live over the prime ring")

    def __call__(self, x: Matrix) -> Matrix:
        return apply_map(self, x)

    def images(self) -> list[Matrix]:
        """Images of the carrier basis (over R, not the prime basis)."""
        return [apply_map(self, b) for b in carriers.basis(self.ring, self.n, self.carrier)]

    def to_json(self) -> dict:
        ring = self.ring
        imgs = [apply_map(self, b) for b in carriers.prime_basis(ring, self.n, self.carrier)]
        return {
            "ring": ring.spec.to_json(),
            "n": self.n,
            "carrier": self.carrier,
            "basis_images": [m.to_json() for m in imgs],
        }


def map_from_basis_images(ring: Ring, n: int, images: Sequence[Matrix], carrier: str = "full") -> AdditiveMap:
    """Prime-ring-linear extension of basis data.

    ``images`` lists either one image per carrier basis element (extended
    R-linearly) or, over GF(p^k), one image per prime basis element
    ``t^s b`` in basis-major order (extended additively only).
    """
    carrier = carriers.normalize_carrier(carrier)
    d = carriers.dim(n, carrier)
    k = ring.k
    if len(images) == d and k > 1:
        gens = ring.generator_powers()
        images = [img.scale(g) for img in images for g in gens]
    if len(images) != d * k:
        raise ShapeError(f"expected {d} (or {d * k}) basis images, got {len(images)}")
    cols = []
    for img in images:
        if img.ring != ring or (img.n_rows, img.n_cols) != (n, n):
            raise ShapeError("basis image has the wrong ring or shape")
        if not carriers.in_carrier(img, carrier):
            raise ShapeError("basis image is not in the carrier")
        cols.append(carriers.prime_coords(img, carrier))
    D = d * k
    pr = ring.prime_ring()
    action = Matrix(pr, D, D, tuple(cols[c][r] for r in range(D) for c in range(D)))
    return AdditiveMap(ring, n, carrier, action)


def map_from_inner(a: Matrix, carrier: str = "full") -> AdditiveMap:
    """x -> ax - xa (use :func:`derivlab.jordan.map_from_skew` on H_n)."""
    ring, n = a.ring, a.n
    return map_from_basis_images(ring, n, [inner_apply(a, b) for b in carriers.basis(ring, n, carrier)], carrier)


def zero_map(ring: Ring, n: int, carrier: str = "full") -> AdditiveMap:
    D = carriers.dim(n, carrier) * ring.k
    return AdditiveMap(ring, n, carrier, Matrix.zeros(ring.prime_ring(), D))


def identity_map(ring: Ring, n: int, carrier: str = "full") -> AdditiveMap:
    D = carriers.dim(n, carrier) * ring.k
    return AdditiveMap(ring, n, carrier, Matrix.identity(ring.prime_ring(), D))


def transpose_map(ring: Ring, n: int) -> AdditiveMap:
    return map_from_basis_images(ring, n, [b.T for b in carriers.basis(ring, n, "full")])


def apply_map(f: AdditiveMap, x: Matrix) -> Matrix:
    if x.ring != f.ring or (x.n_rows, x.n_cols) != (f.n, f.n):
        raise ShapeError("point has the wrong ring or shape")
    if not carriers.in_carrier(x, f.carrier):
        raise ShapeError("point is not in the carrier of the map")
    v = carriers.prime_coords(x, f.carrier)
    pr = f.action.ring
    A = f.action
    D = A.n_cols
    E = A.entries
    mod = pr.modulus
    out = []
    for r in range(D):
        s = sum(a * b for a, b in zip(E[r * D:(r + 1) * D], v) if a and b)
        out.append(s % mod if mod else pr.normalize(s))
    return carriers.from_prime_coords(f.ring, f.n, f.carrier, out)


def maps_equal(f: AdditiveMap, g: AdditiveMap) -> bool:
    return (f.ring, f.n, f.carrier, f.action) == (g.ring, g.n, g.carrier, g.action)


@dataclass
class Verdict:
    outcome: str
    witness: Matrix | None = None
    checked_points: int = 0
    failing_points: int = 0
    sample_size: int | None = None
    seed: int | None = None
    stats: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.outcome != "reject"

    def to_json(self) -> dict:
        d = {"outcome": self.outcome,
             "witness": self.witness.to_json() if self.witness is not None else None,
             "checked_points": self.checked_points,
             "failing_points": self.failing_points,
             "seed": self.seed}
        if self.sample_size is not None:
            d["sample_size"] = self.sample_size
        return d


def default_points(ring: Ring, n: int, carrier: str, budget: int = DEFAULT_BUDGET,
                   samples: int = 1000, seed: int = 0) -> PointSet:
    """Exhaustive when the ring is finite and the algebra fits the budget."""
    if ring.is_finite and exhaustive_size(ring, n, carrier) <= budget:
        return PointSet.exhaustive()
    return PointSet.sampled(samples, seed)


def run_check(f: AdditiveMap, pts: PointSet | None, budget: int, resolver) -> Verdict:
    """Shared driver for the associative and Jordan checkers.

    ``resolver(x, y)`` is the independent exact solve used to re-verify a
    rejected point.
    """
    if pts is None:
        pts = default_points(f.ring, f.n, f.carrier, budget)
    bank = point_bank(f.ring, f.n, f.carrier, pts, budget)
    ok = bank.accepts(f.action)
    bad = np.flatnonzero(~ok)
    seed = pts.seed if pts.mode == "sampled" else None
    sample = pts.count if pts.mode == "sampled" else None
    if len(bad):
        x = bank.matrix(int(bad[0]))
        if resolver(x, apply_map(f, x)).solvable:
            raise InternalFault(f"certificate rejected {x} but the exact solve found a witness")
        return Verdict("reject", x, bank.size, len(bad), sample, seed)
    outcome = "certified-accept" if pts.mode == "exhaustive" else "probabilistic-accept"
    return Verdict(outcome, None, bank.size, 0, sample, seed)


def check_local_inner(f: AdditiveMap, pts: PointSet | None = None, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Does every x in ``pts`` admit a with f(x) = ax - xa?"""
    if f.carrier != "full":
        raise ValueError("use derivlab.jordan.check_local_inner_jordan for the Jordan carrier")
    return run_check(f, pts, budget, sylvester_solve)


def is_derivation(f: AdditiveMap) -> bool:
    """Leibniz rule f(xy) = f(x)y + x f(y) on all pairs of prime-basis elements."""
    if f.carrier != "full":
        raise ValueError("use derivlab.jordan.jordan_is_derivation for the Jordan carrier")
    B = carriers.prime_basis(f.ring, f.n, "full")
    img = [apply_map(f, b) for b in B]
    for x, fx in zip(B, img):
        for y, fy in zip(B, img):
            if apply_map(f, x @ y) != fx @ y + x @ fy:
                return False
    return True


def gen_basis_patched(implementers: Sequence[Matrix]) -> AdditiveMap:
    """f(e_ij) = D_{a_ij}(e_ij) with one implementer per matrix unit, extended linearly."""
    if not implementers:
        raise ValueError("need one implementer per matrix unit")
    ring = implementers[0].ring
    n = implementers[0].n
    units = carriers.basis(ring, n, "full")
    if len(implementers) != len(units):
        raise ShapeError(f"expected {len(units)} implementers")
    return map_from_basis_images(ring, n, [inner_apply(a, e) for a, e in zip(implementers, units)])


def random_matrix(ring: Ring, n: int, rng: random.Random) -> Matrix:
    return Matrix(ring, n, n, tuple(ring.random(rng) for _ in range(n * n)))


def random_basis_patched(ring: Ring, n: int, rng: random.Random) -> AdditiveMap:
    return gen_basis_patched([random_matrix(ring, n, rng) for _ in range(n * n)])
