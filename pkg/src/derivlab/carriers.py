"""Module bases and coordinates for M_n(R) ("full") and H_n(R) ("jordan").

Full basis: e_11, e_12, ..., e_nn (row-major).
Jordan basis: e_11, ..., e_nn, then e_ij + e_ji for i < j in row-major order.

Over GF(p^k) every ring coordinate is split into k GF(p) coordinates
(coefficients of 1, t, ..., t^(k-1)), giving the prime-ring coordinates in
which additive maps are written.
"""
from __future__ import annotations

import functools

from .derivations import sylvester_rows
from .matrices import Matrix, sym_unit, unit
from .scalars import Ring

CARRIERS = ("full", "jordan")


def normalize_carrier(name: str) -> str:
    if name in ("full", "full-matrix-algebra"):
        return "full"
    if name in ("jordan", "jordan-symmetric"):
        return "jordan"
    raise ValueError(f"unknown carrier {name!r}")


@functools.lru_cache(maxsize=None)
def positions(n: int, carrier: str) -> tuple[tuple[int, int], ...]:
    """0-based (i, j) entry read by each ring coordinate."""
    if carrier == "full":
        return tuple((i, j) for i in range(n) for j in range(n))
    return tuple((i, i) for i in range(n)) + tuple(
        (i, j) for i in range(n) for j in range(i + 1, n))


def dim(n: int, carrier: str) -> int:
    return n * n if carrier == "full" else n * (n + 1) // 2


def basis(ring: Ring, n: int, carrier: str) -> list[Matrix]:
    if carrier == "full":
        return [unit(ring, n, i + 1, j + 1) for i, j in positions(n, carrier)]
    return [sym_unit(ring, n, i + 1, j + 1) for i, j in positions(n, carrier)]


def prime_basis(ring: Ring, n: int, carrier: str) -> list[Matrix]:
    """Basis over the prime ring: t^s * b for each carrier basis element b."""
    gens = ring.generator_powers()
    return [b.scale(g) for b in basis(ring, n, carrier) for g in gens]


def in_carrier(x: Matrix, carrier: str) -> bool:
    if x.n_rows != x.n_cols:
        return False
    return carrier == "full" or x.T == x


def coords(x: Matrix, carrier: str) -> tuple:
    """Ring coordinates of x."""
    return tuple(x[i, j] for i, j in positions(x.n, carrier))


def from_coords(ring: Ring, n: int, carrier: str, c) -> Matrix:
    e = [ring.zero] * (n * n)
    sym = carrier == "jordan"
    for (i, j), v in zip(positions(n, carrier), c):
        e[i * n + j] = v
        if sym:
            e[j * n + i] = v
    return Matrix(ring, n, n, tuple(e))


def prime_coords(x: Matrix, carrier: str) -> tuple:
    ring = x.ring
    if ring.k == 1:
        return coords(x, carrier)
    return tuple(d for v in coords(x, carrier) for d in ring.to_prime(v))


def from_prime_coords(ring: Ring, n: int, carrier: str, pc) -> Matrix:
    k = ring.k
    if k == 1:
        return from_coords(ring, n, carrier, tuple(pc))
    c = [ring.from_prime(pc[i * k:(i + 1) * k]) for i in range(len(pc) // k)]
    return from_coords(ring, n, carrier, c)


@functools.lru_cache(maxsize=None)
def skew_positions(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def skew_from_coords(ring: Ring, n: int, c) -> Matrix:
    e = [ring.zero] * (n * n)
    for (i, j), v in zip(skew_positions(n), c):
        e[i * n + j] = v
        e[j * n + i] = ring.neg(v)
    return Matrix(ring, n, n, tuple(e))


def jordan_rows(x: Matrix) -> list[list]:
    """Equations of c -> cx - xc in Jordan coordinates, unknowns c_ij (i<j) of skew c."""
    n = x.n
    ring = x.ring
    full = sylvester_rows(x)
    out = []
    for i, j in positions(n, "jordan"):
        r = full[i * n + j]
        out.append([ring.sub(r[k * n + l], r[l * n + k]) for k, l in skew_positions(n)])
    return out


def system_rows(x: Matrix, carrier: str) -> list[list]:
    return sylvester_rows(x) if carrier == "full" else jordan_rows(x)
