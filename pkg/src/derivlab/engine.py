"""Point sets and solvability certificates for the local checkers.

Deciding whether ``y = f(x)`` has an inner witness at a point ``x`` is the
question "is y in the image of the witness operator M_x?".  The operator
depends only on x, so for a fixed point set we precompute, once, a
certificate per point and then test any number of maps against it:

* finite rings (Z/m, GF(p), GF(p^k) split over GF(p)): per prime power
  q = p^e dividing the characteristic, a batched numpy elimination with
  valuation pivoting gives an invertible P and valuations v_i with
  P M_x Q = diag(p^v_i).  Then y is in the image iff (P y)_i is divisible
  by p^v_i for every i (rows with no pivot need (P y)_i = 0 mod q).
* Z and Q (and finite rings too large for int64): Smith normal form per
  point; Z/m with a large modulus goes through the lifted system [M | m I].
"""
from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import carriers
from .matrices import Matrix, _snf, sym_unit, unit
from .scalars import InfiniteRing, Ring, factorize

DEFAULT_BUDGET = 2 ** 20
BATCH_MODULUS_LIMIT = 2 ** 16
_CHUNK = 32768


class BudgetExceeded(ValueError):
    pass


# -- point sets -------------------------------------------------------------

@dataclass(frozen=True)
class PointSet:
    """Which points of the algebra a checker interrogates."""

    mode: str = "exhaustive"
    count: int = 0
    seed: int = 0
    points: tuple = ()

    @classmethod
    def exhaustive(cls) -> "PointSet":
        return cls("exhaustive")

    @classmethod
    def sampled(cls, count: int = 1000, seed: int = 0) -> "PointSet":
        return cls("sampled", count=count, seed=seed)

    @classmethod
    def explicit(cls, points: Sequence[Matrix]) -> "PointSet":
        return cls("explicit", points=tuple(points))

    def to_json(self) -> dict:
        if self.mode == "sampled":
            return {"mode": "sampled", "count": self.count, "seed": self.seed}
        if self.mode == "explicit":
            return {"mode": "explicit", "count": len(self.points)}
        return {"mode": "exhaustive"}


def scalar_palette(ring: Ring) -> list:
    """Scalars used for the structured points."""
    if ring.is_finite and ring.cardinality <= 5:
        return [v for v in ring.elements() if v != ring.zero]
    pal = [ring.one, ring.neg(ring.one), ring.add(ring.one, ring.one)]
    if ring.kind == "rationals":
        pal.append(Fraction(1, 2))
    if ring.kind == "extension-field":
        pal.append(ring.generator_powers()[1])
    out = []
    for v in pal:
        if v != ring.zero and v not in out:
            out.append(v)
    return out


def _combo(ring: Ring, n: int, terms) -> Matrix:
    e = [ring.zero] * (n * n)
    for c, i, j in terms:
        e[i * n + j] = ring.add(e[i * n + j], c)
    return Matrix(ring, n, n, tuple(e))


def structured_points(ring: Ring, n: int, carrier: str) -> list[Matrix]:
    """Units, scaled units, and the two/three/four-term sums used by the
    pairwise witness arguments, plus the superdiagonal sums."""
    pal = scalar_palette(ring)
    small = pal[:2]
    pts: list[Matrix] = []
    rng = range(n)
    if carrier == "full":
        for i in rng:
            for j in rng:
                for c in pal:
                    pts.append(_combo(ring, n, [(c, i, j)]))
        for i, j in itertools.permutations(rng, 2):
            for l, m in itertools.product(pal, repeat=2):
                pts.append(_combo(ring, n, [(l, i, i), (m, i, j)]))
                pts.append(_combo(ring, n, [(l, i, i), (m, j, i)]))
                pts.append(_combo(ring, n, [(l, i, j), (m, j, i)]))
            for l, m, v in itertools.product(small, repeat=3):
                pts.append(_combo(ring, n, [(l, i, i), (m, i, j), (v, j, i)]))
            for l, m, v, r in itertools.product(small, repeat=4):
                pts.append(_combo(ring, n, [(l, i, i), (m, i, j), (v, j, i), (r, j, j)]))
        for i, j, k in itertools.permutations(rng, 3):
            for l, m in itertools.product(small, repeat=2):
                pts.append(_combo(ring, n, [(l, i, j), (m, j, k)]))
        one = ring.one
        pts.append(_combo(ring, n, [(one, k, k + 1) for k in range(n - 1)]))
        for i in rng:
            for j in range(i + 1, n):
                pts.append(_combo(ring, n, [(one, k, k + 1) for k in range(i, j)] + [(one, j, i)]))
    else:
        sym = {(i, j): sym_unit(ring, n, i + 1, j + 1) for i, j in carriers.positions(n, "jordan")}
        keys = list(sym)
        for key in keys:
            for c in pal:
                pts.append(sym[key].scale(c))
        for a, b in itertools.combinations(keys, 2):
            for l, m in itertools.product(pal, repeat=2):
                pts.append(sym[a].scale(l) + sym[b].scale(m))
        for a, b, c in itertools.combinations(keys, 3):
            for l, m, v in itertools.product(small, repeat=3):
                pts.append(sym[a].scale(l) + sym[b].scale(m) + sym[c].scale(v))
        s = Matrix.zeros(ring, n)
        for k in range(n - 1):
            s = s + sym[(k, k + 1)]
        pts.append(s)
    seen = set()
    out = []
    for p in pts:
        if p.entries not in seen:
            seen.add(p.entries)
            out.append(p)
    return out


def random_point(ring: Ring, n: int, carrier: str, rng: random.Random) -> Matrix:
    c = [ring.random(rng) for _ in range(carriers.dim(n, carrier))]
    return carriers.from_coords(ring, n, carrier, c)


def sampled_points(ring: Ring, n: int, carrier: str, count: int, seed: int) -> list[Matrix]:
    rng = random.Random(seed)
    pts = structured_points(ring, n, carrier)
    pts += [random_point(ring, n, carrier, rng) for _ in range(count)]
    return pts


def exhaustive_size(ring: Ring, n: int, carrier: str) -> int:
    if not ring.is_finite:
        raise InfiniteRing(f"exhaustive checking needs a finite ring, got {ring.spec}")
    return ring.cardinality ** carriers.dim(n, carrier)


# -- batched certificates over Z/m ------------------------------------------

@functools.lru_cache(maxsize=None)
def _tables(p: int, e: int):
    q = p ** e
    vals = np.full(q, e, dtype=np.int64)
    uinv = np.ones(q, dtype=np.int64)
    for v in range(1, q):
        t, k = v, 0
        while t % p == 0:
            t //= p
            k += 1
        vals[v] = k
        if k == 0:
            uinv[v] = pow(v, -1, q)
    return vals, uinv


def _binary_certificates(M: np.ndarray):
    """GF(2) special case of :func:`local_certificates` using XOR."""
    A = (np.asarray(M) & 1).astype(np.uint8)
    B, R, C = A.shape
    P = np.broadcast_to(np.eye(R, dtype=np.uint8), (B, R, R)).copy()
    div = np.full((B, R), 2, dtype=np.int64)
    ar = np.arange(B)
    for t in range(min(R, C)):
        W = A[:, t:, t:].reshape(B, -1)
        idx = W.argmax(axis=1)
        live = W[ar, idx] == 1
        w = C - t
        ri = t + idx // w
        ci = t + idx % w
        tmp = A[ar, t].copy()
        A[ar, t] = A[ar, ri]
        A[ar, ri] = tmp
        tmp = P[ar, t].copy()
        P[ar, t] = P[ar, ri]
        P[ar, ri] = tmp
        tmp = A[ar, :, t].copy()
        A[ar, :, t] = A[ar, :, ci]
        A[ar, :, ci] = tmp
        fac = A[:, t + 1:, t] & live[:, None]
        A[:, t + 1:, t:] ^= fac[:, :, None] & A[:, None, t, t:]
        P[:, t + 1:, :] ^= fac[:, :, None] & P[:, None, t, :]
        div[:, t] = np.where(live, 1, 2)
    return P.astype(np.int64), div


def local_certificates(M: np.ndarray, p: int, e: int):
    """Return (P, div) for a batch of matrices over Z/p^e (see module doc)."""
    if p == 2 and e == 1:
        return _binary_certificates(M)
    return _modular_certificates(M, p, e)


def _modular_certificates(M: np.ndarray, p: int, e: int):
    q = p ** e
    vals, uinv = _tables(p, e)
    dt = np.int16 if q <= 181 else (np.int32 if q * q < 2 ** 31 else np.int64)
    A = (np.asarray(M) % q).astype(dt)
    B, R, C = A.shape
    P = np.broadcast_to(np.eye(R, dtype=dt), (B, R, R)).copy()
    div = np.full((B, R), q, dtype=np.int64)
    ar = np.arange(B)
    for t in range(min(R, C)):
        W = A[:, t:, t:]
        if e == 1:
            V = (W == 0).reshape(B, -1)
        else:
            V = vals[W].reshape(B, -1)
        idx = V.argmin(axis=1)
        vmin = vals[W.reshape(B, -1)[ar, idx]]
        w = C - t
        ri = t + idx // w
        ci = t + idx % w
        tmp = A[ar, t].copy()
        A[ar, t] = A[ar, ri]
        A[ar, ri] = tmp
        tmp = P[ar, t].copy()
        P[ar, t] = P[ar, ri]
        P[ar, ri] = tmp
        tmp = A[ar, :, t].copy()
        A[ar, :, t] = A[ar, :, ci]
        A[ar, :, ci] = tmp
        live = vmin < e
        pw = np.where(live, p ** np.minimum(vmin, e - 1), 1)
        unit_part = np.where(live, A[:, t, t] // pw, 1)
        sc = uinv[unit_part % q].astype(dt)
        A[:, t, t:] = A[:, t, t:] * sc[:, None] % q
        P[:, t, :] = P[:, t, :] * sc[:, None] % q
        # rows below t are zero left of column t, so only the window changes
        fac = np.where(live[:, None], A[:, t + 1:, t] // pw[:, None].astype(dt), 0).astype(dt)
        A[:, t + 1:, t:] = (A[:, t + 1:, t:] - fac[:, :, None] * A[:, None, t, t:]) % q
        P[:, t + 1:, :] = (P[:, t + 1:, :] - fac[:, :, None] * P[:, None, t, :]) % q
        div[:, t] = np.where(live, pw, q)
    return P.astype(np.int64), div


def batched_certificates(M: np.ndarray, m: int):
    """Certificates of a batch of integer matrices over Z/m, one per prime power."""
    out = []
    for p, e in factorize(m):
        q = p ** e
        parts = [local_certificates(M[s:s + _CHUNK], p, e) for s in range(0, len(M), _CHUNK)]
        P = np.concatenate([a for a, _ in parts]) if parts else np.zeros((0,) + M.shape[1:2] * 2, np.int64)
        div = np.concatenate([b for _, b in parts]) if parts else np.zeros((0, M.shape[1]), np.int64)
        dtype = np.int8 if q < 128 else (np.int16 if q < 2 ** 15 else np.int64)
        out.append((q, P.astype(dtype), div.astype(dtype if q < 2 ** 15 else np.int64)))
    return out


def batched_accepts(certs, Y: np.ndarray) -> np.ndarray:
    """Y has shape (..., B, E); returns a bool array of shape (..., B)."""
    ok = None
    for q, P, div in certs:
        Yq = Y % q
        Z = np.einsum("bij,...bj->...bi", P.astype(np.int64), Yq) % q
        good = (Z % div.astype(np.int64) == 0).all(axis=-1)
        ok = good if ok is None else ok & good
    if ok is None:
        return np.ones(Y.shape[:-1], dtype=bool)
    return ok


@functools.lru_cache(maxsize=None)
def _companion(ring: Ring) -> np.ndarray:
    """C[s] is the GF(p)-matrix of multiplication by t^s."""
    k = ring.k
    gens = ring.generator_powers()
    C = np.zeros((k, k, k), dtype=np.int64)
    for s in range(k):
        for r in range(k):
            C[s, :, r] = ring.to_prime(ring.mul(gens[s], gens[r]))
    return C


def batched_systems(ring: Ring, n: int, carrier: str, X: np.ndarray) -> np.ndarray:
    """Witness operators over the prime ring for a batch of prime-coordinate points."""
    k = ring.k
    m = ring.prime_modulus
    B = len(X)
    pos = carriers.positions(n, carrier)
    Xe = np.zeros((B, n, n, k), dtype=np.int64)
    Xc = X.reshape(B, len(pos), k)
    for c, (i, j) in enumerate(pos):
        Xe[:, i, j] = Xc[:, c]
        if carrier == "jordan":
            Xe[:, j, i] = Xc[:, c]
    T = np.einsum("srq,bijq->bijsr", _companion(ring), Xe) % m
    eye = np.eye(n, dtype=np.int64)
    full = (np.einsum("ik,bljsr->bijrkls", eye, T)
            - np.einsum("biksr,lj->bijrkls", T, eye)).reshape(B, n * n * k, n * n * k) % m
    if carrier == "full":
        return full
    rows = [(i * n + j) * k + r for i, j in pos for r in range(k)]
    plus = [(i * n + j) * k + s for i, j in carriers.skew_positions(n) for s in range(k)]
    minus = [(j * n + i) * k + s for i, j in carriers.skew_positions(n) for s in range(k)]
    sel = full[:, rows]
    return (sel[:, :, plus] - sel[:, :, minus]) % m


# -- exact per-point certificates -------------------------------------------

def _lcm_den(vals) -> int:
    L = 1
    for v in vals:
        if isinstance(v, Fraction):
            L = L * v.denominator // math.gcd(L, v.denominator)
    return L


def exact_certificate(ring: Ring, rows: list[list]) -> list[tuple[tuple, int]]:
    """(w, d) pairs: y is in the column space iff w.y = 0 mod d (d = 0: exactly 0)."""
    E = len(rows)
    U = len(rows[0]) if rows else 0
    if ring.kind == "rationals":
        L = _lcm_den(v for r in rows for v in r)
        M = [[int(v * L) for v in r] for r in rows]
    elif ring.kind == "integers":
        M = [list(r) for r in rows]
    else:
        m = ring.modulus
        M = [list(r) + [m if c == i else 0 for c in range(E)] for i, r in enumerate(rows)]
        U += E
    if not M or U == 0:
        return [(tuple(int(i == j) for j in range(E)), 0 if ring.kind in ("rationals", "integers") else ring.modulus)
                for i in range(E)]
    P, S, _, _, _ = _snf(M)
    out = []
    for i in range(E):
        s = S[i][i] if i < U else 0
        if s == 1 or (ring.kind == "rationals" and s != 0):
            continue
        out.append((tuple(P[i]), s))
    return out


def exact_accepts(cert, y: Sequence[int]) -> bool:
    for w, d in cert:
        t = sum(a * b for a, b in zip(w, y) if a)
        if (t % d) if d else t:
            return False
    return True


# -- point banks ------------------------------------------------------------

class PointBank:
    """Materialized points of one (ring, n, carrier, PointSet) with certificates."""

    def __init__(self, ring: Ring, n: int, carrier: str, pts: PointSet, budget: int = DEFAULT_BUDGET):
        self.ring, self.n, self.carrier, self.pts = ring, n, carrier, pts
        self.exhaustive = pts.mode == "exhaustive"
        pm = ring.prime_modulus
        self.batch = ring.is_finite and pm <= BATCH_MODULUS_LIMIT
        if not self.batch and ring.k > 1:
            raise NotImplementedError("extension fields with p > 2^16 are not supported")
        self._matrices: list[Matrix] | None = None
        if self.exhaustive:
            size = exhaustive_size(ring, n, carrier)
            if size > budget:
                raise BudgetExceeded(
                    f"{size} points exceed the exhaustive budget {budget}; use sampled mode")
            self.size = size
            if self.batch:
                self.X = self._exhaustive_coords()
            else:
                self._matrices = [self._index_matrix(i) for i in range(size)]
        else:
            if pts.mode == "sampled":
                mats = sampled_points(ring, n, carrier, pts.count, pts.seed)
            else:
                mats = list(pts.points)
                for x in mats:
                    if x.ring != ring or x.n_rows != n or not carriers.in_carrier(x, carrier):
                        raise ValueError("explicit point outside the carrier")
            self._matrices = mats
            self.size = len(mats)
            if self.batch:
                D = carriers.dim(n, carrier) * ring.k
                self.X = np.array([carriers.prime_coords(x, carrier) for x in mats],
                                  dtype=np.int64).reshape(len(mats), D)
        if self.batch:
            M = np.concatenate([batched_systems(ring, n, carrier, self.X[s:s + _CHUNK])
                                for s in range(0, self.size, _CHUNK)]) if self.size else \
                np.zeros((0, 0, 0), np.int64)
            self.certs = batched_certificates(M, pm) if self.size else []
        else:
            self._scaled = []
            self.certs = []
            for x in self._matrices:
                c = carriers.coords(x, carrier)
                if ring.kind == "rationals":
                    L = _lcm_den(c)
                    self._scaled.append(tuple(int(v * L) for v in c))
                else:
                    self._scaled.append(tuple(c))
                self.certs.append(exact_certificate(ring, carriers.system_rows(x, carrier)))

    def _exhaustive_coords(self) -> np.ndarray:
        ring = self.ring
        q = ring.cardinality
        d = carriers.dim(self.n, self.carrier)
        idx = np.arange(self.size, dtype=np.int64)
        codes = np.stack([(idx // q ** (d - 1 - e)) % q for e in range(d)], axis=1)
        digits = np.array([ring.to_prime(v) for v in range(q)], dtype=np.int64)
        return digits[codes].reshape(self.size, d * ring.k)

    def _index_matrix(self, i: int) -> Matrix:
        ring = self.ring
        q = ring.cardinality
        d = carriers.dim(self.n, self.carrier)
        codes = [(i // q ** (d - 1 - e)) % q for e in range(d)]
        return carriers.from_coords(ring, self.n, self.carrier, codes)

    def matrix(self, i: int) -> Matrix:
        if self._matrices is not None:
            return self._matrices[i]
        if self.exhaustive:
            return self._index_matrix(i)
        return carriers.from_prime_coords(self.ring, self.n, self.carrier, tuple(int(v) for v in self.X[i]))

    def images(self, action: Matrix) -> np.ndarray:
        """Prime coordinates of f(x) for every point (batch mode)."""
        A = np.array(action.rows(), dtype=np.int64)
        return (self.X @ A.T) % self.ring.prime_modulus

    def accepts(self, action: Matrix) -> np.ndarray:
        """Boolean array: does f(x) have a witness at each point?"""
        if self.batch:
            return batched_accepts(self.certs, self.images(action))
        rows = action.rows()
        if self.ring.kind == "rationals":
            L = _lcm_den(v for r in rows for v in r)
            rows = [[int(v * L) for v in r] for r in rows]
        mod = self.ring.modulus
        out = np.empty(self.size, dtype=bool)
        for idx, (x, cert) in enumerate(zip(self._scaled, self.certs)):
            y = [sum(a * b for a, b in zip(r, x) if a) for r in rows]
            if mod:
                y = [v % mod for v in y]
            out[idx] = exact_accepts(cert, y)
        return out


@functools.lru_cache(maxsize=8)
def point_bank(ring: Ring, n: int, carrier: str, pts: PointSet, budget: int = DEFAULT_BUDGET) -> PointBank:
    return PointBank(ring, n, carrier, pts, budget)


def unit_matrix(ring: Ring, n: int, i: int, j: int) -> Matrix:
    return unit(ring, n, i + 1, j + 1)
