"""Total enumeration of prime-ring-linear self-maps of M_n(R) or H_n(R).

Every map is encoded by its D x D action matrix over GF(p); map number N
has entry (r, c) equal to base-p digit r*D + c of N, most significant first.
Local innerness is decided against the cached point certificates for all
maps of a chunk at once, and the Leibniz rule is a linear condition on the
action evaluated the same way.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import carriers
from .engine import DEFAULT_BUDGET, BudgetExceeded, PointSet, batched_accepts, point_bank
from .derivations import inner_equal
from .globalize import globalize_direct, globalize_stitch
from .jordan import globalize_jordan, globalize_jordan_corners, jordan_is_derivation, jordan_product, map_from_skew, two_invertible
from .localcheck import AdditiveMap, InternalFault, is_derivation, map_from_inner
from .matrices import Matrix
from .scalars import InfiniteRing, Ring

CHUNK = 4096


@dataclass
class ScanResult:
    ring: str
    n: int
    algebra: str
    maps_scanned: int
    local_inner: list[int] = field(default_factory=list)
    inner: list[int] = field(default_factory=list)
    derivations: list[int] = field(default_factory=list)
    implementers: dict = field(default_factory=dict)
    product: str | None = None
    seconds: float = 0.0

    @property
    def equalities_hold(self) -> bool:
        return self.local_inner == self.inner

    def to_json(self) -> dict:
        d = {
            "ring": self.ring, "n": self.n, "algebra": self.algebra,
            "maps_scanned": self.maps_scanned,
            "local_inner_count": len(self.local_inner),
            "inner_count": len(self.inner),
            "derivation_count": len(self.derivations),
            "local_inner_equals_inner": self.equalities_hold,
            "local_inner": [{"index": i, "implementer": self.implementers[i].to_json()} for i in self.local_inner],
            "seconds": round(self.seconds, 3),
        }
        if self.product:
            d["product"] = self.product
        return d


def map_space_size(ring: Ring, n: int, carrier: str) -> int:
    if not ring.is_finite:
        raise InfiniteRing(f"{ring.spec} is infinite; the map space cannot be enumerated")
    D = carriers.dim(n, carrier) * ring.k
    return ring.prime_modulus ** (D * D)


def decode_actions(p: int, D: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    E = D * D
    digits = np.stack([(idx // p ** (E - 1 - e)) % p for e in range(E)], axis=1)
    return digits.reshape(-1, D, D)


def encode_action(action: Matrix) -> int:
    p = action.ring.modulus
    code = 0
    for v in action.entries:
        code = code * p + int(v)
    return code


def map_at(ring: Ring, n: int, carrier: str, index: int) -> AdditiveMap:
    D = carriers.dim(n, carrier) * ring.k
    A = decode_actions(ring.prime_modulus, D, index, index + 1)[0]
    pr = ring.prime_ring()
    return AdditiveMap(ring, n, carrier, Matrix(pr, D, D, tuple(int(v) for v in A.ravel())))


def _coords(x: Matrix, carrier: str) -> list[int]:
    return [int(v) for v in carriers.prime_coords(x, carrier)]


def leibniz_operators(ring: Ring, n: int, carrier: str):
    """(L, R, W) with f a derivation iff A W[s,t] = R[t] A e_s + L[s] A e_t for all s, t.

    L_s z = b_s * z and R_t z = z * b_t, where * is the matrix product on the
    full algebra and the Jordan product on H_n (doubled when 2 is not a unit).
    """
    B = carriers.prime_basis(ring, n, carrier)
    D = len(B)
    doubled = not two_invertible(ring) if carrier == "jordan" else False

    def prod(x, y):
        return x @ y if carrier == "full" else jordan_product(x, y, doubled).underlying

    L = [np.array([_coords(prod(b, z), carrier) for z in B], dtype=np.int64).T for b in B]
    R = [np.array([_coords(prod(z, b), carrier) for z in B], dtype=np.int64).T for b in B]
    W = np.array([[_coords(prod(B[s], B[t]), carrier) for t in range(D)] for s in range(D)], dtype=np.int64)
    return L, R, W


def derivation_mask(actions: np.ndarray, ops, p: int) -> np.ndarray:
    L, R, W = ops
    D = actions.shape[1]
    ok = np.ones(len(actions), dtype=bool)
    for s, t in itertools.product(range(D), repeat=2):
        lhs = actions @ W[s, t]
        rhs = actions[:, :, s] @ R[t].T + actions[:, :, t] @ L[s].T
        ok &= ((lhs - rhs) % p == 0).all(axis=1)
    return ok


def _implemented_set(ring: Ring, n: int, carrier: str):
    """Map index -> first implementer found, over every implementer."""
    out = {}
    elems = ring.elements()
    if carrier == "full":
        for vals in itertools.product(elems, repeat=n * n):
            a = Matrix(ring, n, n, tuple(vals))
            out.setdefault(encode_action(map_from_inner(a).action), a)
    else:
        for vals in itertools.product(elems, repeat=len(carriers.skew_positions(n))):
            c = carriers.skew_from_coords(ring, n, vals)
            out.setdefault(encode_action(map_from_skew(c).action), c)
    return out


def scan(ring: Ring, n: int, carrier: str, budget: int = DEFAULT_BUDGET, chunk: int = CHUNK) -> ScanResult:
    carrier = carriers.normalize_carrier(carrier)
    total = map_space_size(ring, n, carrier)
    if total > budget:
        raise BudgetExceeded(f"{total} maps exceed the scan budget {budget}; use sampled checks instead")
    t0 = time.perf_counter()
    p = ring.prime_modulus
    D = carriers.dim(n, carrier) * ring.k
    bank = point_bank(ring, n, carrier, PointSet.exhaustive(), budget)
    ops = leibniz_operators(ring, n, carrier)
    res = ScanResult(str(ring.spec), n, carrier, total)
    if carrier == "jordan":
        res.product = "half" if two_invertible(ring) else "doubled"
    for start in range(0, total, chunk):
        A = decode_actions(p, D, start, min(total, start + chunk))
        Y = np.einsum("bd,nkd->nbk", bank.X, A) % p
        acc = batched_accepts(bank.certs, Y).all(axis=1)
        der = derivation_mask(A, ops, p)
        res.local_inner.extend((start + np.flatnonzero(acc)).tolist())
        res.derivations.extend((start + np.flatnonzero(der)).tolist())
    impl = _implemented_set(ring, n, carrier)
    res.inner = sorted(impl)
    for idx in res.local_inner:
        f = map_at(ring, n, carrier, idx)
        if carrier == "full":
            a = globalize_direct(f)
            if not inner_equal(a, globalize_stitch(f)):
                raise InternalFault(f"globalization paths disagree on map {idx}")
            if map_from_inner(a).action != f.action or not is_derivation(f):
                raise InternalFault(f"accepted map {idx} is not the inner derivation of its implementer")
            res.implementers[idx] = a
        else:
            c = globalize_jordan(f).c
            if globalize_jordan_corners(f).c != c:
                raise InternalFault(f"Jordan globalization routes disagree on map {idx}")
            if map_from_skew(c).action != f.action or not jordan_is_derivation(f):
                raise InternalFault(f"accepted Jordan map {idx} is not induced by its skew implementer")
            res.implementers[idx] = c
    res.seconds = time.perf_counter() - t0
    return res

