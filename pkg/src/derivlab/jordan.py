"""The Jordan algebra H_n(R) of symmetric matrices.

Inner Jordan derivations sum_k [L_{a_k}, L_{b_k}] act on H_n as commutation
with the skew matrix c = 1/4 sum_k [a_k, b_k], so local and global
questions reduce to linear systems in the n(n-1)/2 entries of c above the
diagonal.  When 2 is not a unit (Z, Z/even) the product ab + ba is used in
place of (ab + ba)/2; commutation with c needs no halving.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Sequence

from . import carriers
from .derivations import inner_apply
from .engine import DEFAULT_BUDGET, PointSet
from .globalize import NotLocalInner
from .localcheck import AdditiveMap, InternalFault, Verdict, apply_map, map_from_basis_images, run_check
from .matrices import (Matrix, ShapeError, SolutionSpace, commutator, is_skew, is_symmetric, solve_linear, sym_unit,
                       unit)
from .scalars import Ring, RingError


@dataclass(frozen=True)
class SymMatrix:
    underlying: Matrix

    def __post_init__(self):
        if not is_symmetric(self.underlying):
            raise ShapeError("SymMatrix needs a symmetric matrix")

    @property
    def ring(self) -> Ring:
        return self.underlying.ring

    @property
    def n(self) -> int:
        return self.underlying.n


@dataclass(frozen=True)
class JordanDerivationPairs:
    pairs: tuple[tuple[SymMatrix, SymMatrix], ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("need at least one pair")
        r, n = self.pairs[0][0].ring, self.pairs[0][0].n
        for a, b in self.pairs:
            for m in (a, b):
                if m.ring != r or m.n != n:
                    raise RingError("pairs mix rings or dimensions")

    @classmethod
    def of(cls, pairs: Sequence[tuple[Matrix, Matrix]]) -> "JordanDerivationPairs":
        return cls(tuple((_sym(a), _sym(b)) for a, b in pairs))

    @property
    def ring(self) -> Ring:
        return self.pairs[0][0].ring

    @property
    def n(self) -> int:
        return self.pairs[0][0].n


@dataclass(frozen=True)
class SkewImplementer:
    c: Matrix

    def __post_init__(self):
        if not is_skew(self.c):
            raise ShapeError("implementer must be skew with zero diagonal")

    def __call__(self, x: Matrix) -> Matrix:
        return inner_apply(self.c, _raw(x))


def _sym(x) -> SymMatrix:
    return x if isinstance(x, SymMatrix) else SymMatrix(x)


def _raw(x) -> Matrix:
    return x.underlying if isinstance(x, SymMatrix) else x


def two_invertible(ring: Ring) -> bool:
    return ring.is_unit(ring.from_int(2))


def product_mode(ring: Ring) -> str:
    """'half' for (ab+ba)/2, 'doubled' for ab+ba when 2 is not a unit."""
    return "half" if two_invertible(ring) else "doubled"


def jordan_product(a, b, doubled: bool = False) -> SymMatrix:
    a, b = _raw(a), _raw(b)
    s = a @ b + b @ a
    if not doubled:
        s = s.scale(a.ring.inv(a.ring.from_int(2)))
    return SymMatrix(s)


def inner_jordan_apply(p: JordanDerivationPairs, x, doubled: bool = False) -> SymMatrix:
    """sum_k a_k o (b_k o x) - b_k o (a_k o x).

    With ``doubled`` every product is ab + ba and the result is commutation
    with sum_k [a_k, b_k] instead of a quarter of it.
    """
    x = _sym(x)
    if x.ring != p.ring or x.n != p.n:
        raise RingError("point does not match the pairs")
    total = Matrix.zeros(p.ring, p.n)
    for a, b in p.pairs:
        u = jordan_product(a, jordan_product(b, x, doubled), doubled).underlying
        v = jordan_product(b, jordan_product(a, x, doubled), doubled).underlying
        total = total + u - v
    return SymMatrix(total)


def pairs_to_skew(p: JordanDerivationPairs) -> SkewImplementer:
    ring = p.ring
    s = Matrix.zeros(ring, p.n)
    for a, b in p.pairs:
        s = s + commutator(a.underlying, b.underlying)
    quarter = ring.inv(ring.from_int(4))
    return SkewImplementer(s.scale(quarter))


def skew_to_pairs(c: SkewImplementer | Matrix) -> JordanDerivationPairs:
    """Pairs (4 c_ij e_ii, e_ij + e_ji), using [e_ii, e_ij + e_ji] = e_ij - e_ji."""
    c = c.c if isinstance(c, SkewImplementer) else SkewImplementer(c).c
    ring, n = c.ring, c.n
    four = ring.from_int(4)
    pairs = []
    for i, j in carriers.skew_positions(n):
        if c[i, j] != ring.zero:
            pairs.append((sym_unit(ring, n, i + 1, i + 1).scale(ring.mul(four, c[i, j])),
                          sym_unit(ring, n, i + 1, j + 1)))
    if not pairs:
        z = Matrix.zeros(ring, n)
        pairs.append((z, z))
    return JordanDerivationPairs.of(pairs)


def map_from_skew(c: SkewImplementer | Matrix) -> AdditiveMap:
    """x -> cx - xc on H_n."""
    c = c.c if isinstance(c, SkewImplementer) else SkewImplementer(c).c
    ring, n = c.ring, c.n
    return map_from_basis_images(ring, n, [inner_apply(c, b) for b in carriers.basis(ring, n, "jordan")], "jordan")


def _skew_system(constraints) -> SolutionSpace:
    x0 = constraints[0][0]
    ring, n = x0.ring, x0.n
    rows, rhs = [], []
    for x, y in constraints:
        if not (is_symmetric(x) and is_symmetric(y)):
            raise ShapeError("Jordan constraints need symmetric matrices")
        rows.extend(carriers.jordan_rows(x))
        rhs.extend(carriers.coords(y, "jordan"))
    U = len(carriers.skew_positions(n))
    if U == 0:
        ok = all(v == ring.zero for v in rhs)
        return SolutionSpace(ring, 0, () if ok else None, [])
    A = Matrix(ring, len(rows), U, tuple(v for r in rows for v in r))
    return solve_linear(A, rhs)


def skew_solve(x: Matrix, y: Matrix) -> SolutionSpace:
    """Skew c (as its entries above the diagonal) with cx - xc = y."""
    return _skew_system([(x, y)])


def check_local_inner_jordan(f: AdditiveMap, pts: PointSet | None = None,
                             budget: int = DEFAULT_BUDGET) -> Verdict:
    """Does every symmetric x in ``pts`` admit a skew c with f(x) = cx - xc?"""
    if f.carrier != "jordan":
        raise ValueError("check_local_inner_jordan needs the jordan carrier")
    v = run_check(f, pts, budget, skew_solve)
    v.stats["product"] = product_mode(f.ring)
    return v


@functools.lru_cache(maxsize=None)
def skew_centralizer_trivial(ring: Ring, n: int) -> bool:
    """No nonzero skew matrix commutes with every element of H_n."""
    z = Matrix.zeros(ring, n)
    sol = _skew_system([(b, z) for b in carriers.basis(ring, n, "jordan")])
    return all(v == ring.zero for h in sol.homogeneous for v in h)


def globalize_jordan(f: AdditiveMap) -> SkewImplementer:
    """The skew c with f(x) = cx - xc on every Jordan basis element."""
    if f.carrier != "jordan":
        raise ValueError("globalize_jordan needs the jordan carrier")
    ring, n = f.ring, f.n
    B = carriers.basis(ring, n, "jordan")
    sol = _skew_system([(b, apply_map(f, b)) for b in B])
    if not sol.solvable:
        raise NotLocalInner("direct", {"constraints": "all Jordan basis elements"})
    if not skew_centralizer_trivial(ring, n):
        raise RuntimeError("skew implementer not unique")
    return _verified(f, carriers.skew_from_coords(ring, n, sol.particular))


def globalize_jordan_corners(f: AdditiveMap) -> SkewImplementer:
    """Second route: read c off the diagonal units, then verify.

    For skew c the (i, j) entry of c e_jj - e_jj c is c_ij when i != j, so
    the images of e_11, ..., e_nn already fix every entry of c.
    """
    if f.carrier != "jordan":
        raise ValueError("globalize_jordan_corners needs the jordan carrier")
    ring, n = f.ring, f.n
    vals = [apply_map(f, unit(ring, n, j + 1, j + 1))[i, j] for i, j in carriers.skew_positions(n)]
    return _verified(f, carriers.skew_from_coords(ring, n, vals))


def reconstruct_jordan(f: AdditiveMap) -> dict:
    """Report of both Jordan routes; a success where the routes differ is a fault."""
    try:
        c = globalize_jordan(f).c
    except NotLocalInner as exc:
        return {"status": "failure", "stage": exc.stage, "violation": exc.violation}
    try:
        agree = globalize_jordan_corners(f).c == c
    except NotLocalInner:
        agree = False
    if not agree:
        raise InternalFault("Jordan globalization routes disagree")
    return {"status": "success", "implementer": c.to_json(), "paths_agree": True,
            "is_derivation": jordan_is_derivation(f), "product": product_mode(f.ring)}


def _verified(f: AdditiveMap, c: Matrix) -> SkewImplementer:
    g = map_from_skew(c)
    if g.action != f.action:
        for b in carriers.prime_basis(f.ring, f.n, "jordan"):
            if apply_map(f, b) != apply_map(g, b):
                raise NotLocalInner("verify", {"point": b.to_json(), "expected": apply_map(f, b).to_json(),
                                               "got": apply_map(g, b).to_json()})
    return SkewImplementer(c)


def jordan_is_derivation(f: AdditiveMap, doubled: bool | None = None) -> bool:
    """f(x o y) = f(x) o y + x o f(y) on all pairs of prime-basis elements.

    ``doubled`` defaults to True exactly when 2 is not a unit.
    """
    if f.carrier != "jordan":
        raise ValueError("jordan_is_derivation needs the jordan carrier")
    if doubled is None:
        doubled = not two_invertible(f.ring)
    B = carriers.prime_basis(f.ring, f.n, "jordan")
    img = [apply_map(f, b) for b in B]
    for x, fx in zip(B, img):
        for y, fy in zip(B, img):
            lhs = apply_map(f, jordan_product(x, y, doubled).underlying)
            rhs = jordan_product(fx, y, doubled).underlying + jordan_product(x, fy, doubled).underlying
            if lhs != rhs:
                return False
    return True


def gen_jordan_patched(implementers: Sequence[Matrix]) -> AdditiveMap:
    """f(b) = c_b b - b c_b with one skew c_b per Jordan basis element."""
    if not implementers:
        raise ValueError("need one implementer per Jordan basis element")
    ring, n = implementers[0].ring, implementers[0].n
    B = carriers.basis(ring, n, "jordan")
    if len(implementers) != len(B):
        raise ShapeError(f"expected {len(B)} implementers")
    return map_from_basis_images(ring, n, [inner_apply(SkewImplementer(c).c, b) for c, b in zip(implementers, B)],
                                 "jordan")


def random_skew(ring: Ring, n: int, rng: random.Random) -> Matrix:
    return carriers.skew_from_coords(ring, n, [ring.random(rng) for _ in carriers.skew_positions(n)])


def random_symmetric(ring: Ring, n: int, rng: random.Random) -> Matrix:
    return carriers.from_coords(ring, n, "jordan", [ring.random(rng) for _ in range(carriers.dim(n, "jordan"))])


def random_jordan_patched(ring: Ring, n: int, rng: random.Random) -> AdditiveMap:
    return gen_jordan_patched([random_skew(ring, n, rng) for _ in range(carriers.dim(n, "jordan"))])

