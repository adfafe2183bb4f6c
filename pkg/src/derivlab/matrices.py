"""Matrices over the exact rings of :mod:`derivlab.scalars` and exact solvers.

Matrix indices are 0-based in Python (``a[i, j]``); the matrix-unit helpers
:func:`unit` and :func:`corner` take 1-based indices, like the usual
``e_{i,j}`` notation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .scalars import Ring, RingError, ring_make


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    ring: Ring
    n_rows: int
    n_cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.n_rows * self.n_cols:
            raise ShapeError("entry count does not match shape")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, ring: Ring, n_rows: int, n_cols: int | None = None) -> "Matrix":
        n_cols = n_rows if n_cols is None else n_cols
        return cls(ring, n_rows, n_cols, (ring.zero,) * (n_rows * n_cols))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls(ring, n, n, tuple(ring.one if i == j else ring.zero
                                     for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence[Any]]) -> "Matrix":
        """Rows of raw values, ints, Fractions or serialized scalars."""
        if not rows or any(len(r) != len(rows[0]) for r in rows) or not rows[0]:
            raise ShapeError("rows must be nonempty and rectangular")
        vals = tuple(ring.parse(v) if isinstance(v, (str, list)) else ring.normalize(v)
                     for r in rows for v in r)
        return cls(ring, len(rows), len(rows[0]), vals)

    @classmethod
    def from_vector(cls, ring: Ring, vec: Sequence, n: int) -> "Matrix":
        return cls(ring, n, n, tuple(vec))

    # -- access -----------------------------------------------------------
    @property
    def n(self) -> int:
        if self.n_rows != self.n_cols:
            raise ShapeError("matrix is not square")
        return self.n_rows

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.n_cols + j]

    def rows(self) -> list[list]:
        c = self.n_cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.n_rows)]

    @property
    def is_zero(self) -> bool:
        z = self.ring.zero
        return all(v == z for v in self.entries)

    def replace(self, updates: dict[tuple[int, int], Any]) -> "Matrix":
        e = list(self.entries)
        for (i, j), v in updates.items():
            e[i * self.n_cols + j] = v
        return Matrix(self.ring, self.n_rows, self.n_cols, tuple(e))

    # -- arithmetic -------------------------------------------------------
    def _same(self, other: "Matrix") -> None:
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.ring != self.ring:
            raise RingError("ring mismatch")
        if (other.n_rows, other.n_cols) != (self.n_rows, self.n_cols):
            raise ShapeError("shape mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        add = self.ring.add
        return Matrix(self.ring, self.n_rows, self.n_cols,
                      tuple(add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        sub = self.ring.sub
        return Matrix(self.ring, self.n_rows, self.n_cols,
                      tuple(sub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(self.ring, self.n_rows, self.n_cols, tuple(neg(a) for a in self.entries))

    def scale(self, c) -> "Matrix":
        """Multiply every entry by the raw ring value ``c``."""
        mul = self.ring.mul
        return Matrix(self.ring, self.n_rows, self.n_cols, tuple(mul(c, a) for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.ring != self.ring:
            raise RingError("ring mismatch")
        if self.n_cols != other.n_rows:
            raise ShapeError(f"cannot multiply {self.n_rows}x{self.n_cols} by "
                             f"{other.n_rows}x{other.n_cols}")
        ring = self.ring
        r, k, c = self.n_rows, self.n_cols, other.n_cols
        A, B = self.entries, other.entries
        cols = [B[j::c] for j in range(c)]
        out = []
        if ring.kind == "extension-field":
            add, mul, zero = ring.add, ring.mul, ring.zero
            for i in range(r):
                row = A[i * k:(i + 1) * k]
                for col in cols:
                    s = zero
                    for a, b in zip(row, col):
                        if a and b:
                            s = add(s, mul(a, b))
                    out.append(s)
        else:
            mod = ring.modulus
            for i in range(r):
                row = A[i * k:(i + 1) * k]
                for col in cols:
                    s = sum(a * b for a, b in zip(row, col))
                    out.append(s % mod if mod else (s if ring.kind == "integers" else ring.normalize(s)))
        return Matrix(ring, r, c, tuple(out))

    @property
    def T(self) -> "Matrix":
        r, c = self.n_rows, self.n_cols
        return Matrix(self.ring, c, r, tuple(self.entries[i * c + j] for j in range(c) for i in range(r)))

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        fmt = self.ring.format
        d = {"n": self.n_rows} if self.n_rows == self.n_cols else {"n_rows": self.n_rows, "n_cols": self.n_cols}
        d["rows"] = [[fmt(v) for v in row] for row in self.rows()]
        return d

    @classmethod
    def from_json(cls, ring: Ring, d: dict) -> "Matrix":
        if not isinstance(d, dict) or "rows" not in d:
            raise ShapeError("matrix JSON needs a 'rows' field")
        m = cls.from_rows(ring, d["rows"])
        if "n" in d and (m.n_rows != d["n"] or m.n_cols != d["n"]):
            raise ShapeError(f"declared n={d['n']} but rows are {m.n_rows}x{m.n_cols}")
        return m

    def __repr__(self):
        body = "; ".join(" ".join(str(self.ring.format(v)) for v in row) for row in self.rows())
        return f"Matrix[{self.ring.spec}]({body})"


# -- corners, symmetry predicates, commutators ---------------------------------

def unit(ring: Ring, n: int, i: int, j: int) -> Matrix:
    """Matrix unit e_{i,j} (1-based indices)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"unit index ({i},{j}) out of range for n={n}")
    e = [ring.zero] * (n * n)
    e[(i - 1) * n + (j - 1)] = ring.one
    return Matrix(ring, n, n, tuple(e))


def sym_unit(ring: Ring, n: int, i: int, j: int) -> Matrix:
    """e_{i,j} + e_{j,i} for i != j, and e_{i,i} on the diagonal."""
    if i == j:
        return unit(ring, n, i, i)
    return unit(ring, n, i, j) + unit(ring, n, j, i)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return a + b


def mat_scale(c, a: Matrix) -> Matrix:
    return a.scale(c)


def transpose(a: Matrix) -> Matrix:
    return a.T


def commutator(a: Matrix, b: Matrix) -> Matrix:
    """[a, b] = ab - ba."""
    if a.n_rows != a.n_cols:
        raise ShapeError("commutator needs square matrices")
    return a @ b - b @ a


def corner(a: Matrix, i: int, j: int) -> Matrix:
    """e_{i,i} a e_{j,j}: the (i,j) entry of a kept in place (1-based)."""
    n = a.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"corner index ({i},{j}) out of range for n={n}")
    e = [a.ring.zero] * (n * n)
    e[(i - 1) * n + (j - 1)] = a[i - 1, j - 1]
    return Matrix(a.ring, n, n, tuple(e))


def is_symmetric(a: Matrix) -> bool:
    return a.n_rows == a.n_cols and a.T == a


def is_skew(a: Matrix) -> bool:
    """a^T = -a with zero diagonal, in every characteristic."""
    if a.n_rows != a.n_cols:
        return False
    z = a.ring.zero
    return a.T == -a and all(a[i, i] == z for i in range(a.n_rows))


# -- linear systems ---------------------------------------------------------

@dataclass
class SolutionSpace:
    """Affine solution set ``particular + span(homogeneous)``.

    Over fields the homogeneous list is a basis, over Z a lattice basis and
    over Z/m only a generating set.
    """

    ring: Ring
    n_unknowns: int
    particular: tuple | None
    homogeneous: list[tuple] = field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return self.particular is not None

    def combine(self, coeffs: Sequence) -> tuple:
        """particular + sum(coeffs[i] * homogeneous[i]) as a raw vector."""
        if self.particular is None:
            raise ValueError("system is unsolvable")
        ring = self.ring
        out = list(self.particular)
        for c, h in zip(coeffs, self.homogeneous):
            out = [ring.add(x, ring.mul(c, y)) for x, y in zip(out, h)]
        return tuple(out)

    def particular_matrix(self, n: int) -> Matrix:
        if self.particular is None:
            raise ValueError("system is unsolvable")
        return Matrix(self.ring, n, n, tuple(self.particular))


def _dedupe(rows: list[list], b: list, zero) -> tuple[list[list], list] | None:
    """Drop zero and repeated equations; None if two copies disagree."""
    seen: dict[tuple, Any] = {}
    out_rows, out_b = [], []
    for r, v in zip(rows, b):
        key = tuple(r)
        if all(x == zero for x in key):
            if v != zero:
                return None
            continue
        if key in seen:
            if seen[key] != v:
                return None
            continue
        seen[key] = v
        out_rows.append(list(r))
        out_b.append(v)
    return out_rows, out_b


def solve_linear(A: Matrix, b: Sequence) -> SolutionSpace:
    """Solve ``A x = b`` exactly over a field, Z or Z/m."""
    ring = A.ring
    if len(b) != A.n_rows:
        raise ShapeError("right-hand side length does not match A")
    b = [ring.parse(v) if isinstance(v, (str, list)) else v for v in b]
    u = A.n_cols
    reduced = _dedupe(A.rows(), list(b), ring.zero)
    if reduced is None:
        return SolutionSpace(ring, u, None, [])
    rows, rhs = reduced
    if ring.is_field:
        return _solve_field(ring, rows, rhs, u)
    if ring.kind == "integers":
        return _solve_integers(ring, rows, rhs, u)
    return _solve_mod(ring, rows, rhs, u)


def _solve_field(ring: Ring, rows: list[list], rhs: list, u: int) -> SolutionSpace:
    zero, one = ring.zero, ring.one
    if ring.kind == "extension-field":
        add, mul, neg, inv = ring.add, ring.mul, ring.neg, ring.inv

        def axpy(row, f, piv):   # row - f * piv
            nf = neg(f)
            return [add(x, mul(nf, y)) if y else x for x, y in zip(row, piv)]

        def scl(row, f):
            return [mul(f, x) for x in row]
    else:
        mod = ring.modulus
        inv = ring.inv
        neg = ring.neg
        if mod:
            def axpy(row, f, piv):
                return [(x - f * y) % mod if y else x for x, y in zip(row, piv)]

            def scl(row, f):
                return [f * x % mod for x in row]
        else:
            def axpy(row, f, piv):
                return [x - f * y if y else x for x, y in zip(row, piv)]

            def scl(row, f):
                return [f * x for x in row]

    aug = [r + [v] for r, v in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(u):
        pr = next((i for i in range(r, len(aug)) if aug[i][col] != zero), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        aug[r] = scl(aug[r], inv(aug[r][col]))
        piv = aug[r]
        for i in range(len(aug)):
            if i != r and aug[i][col] != zero:
                aug[i] = axpy(aug[i], aug[i][col], piv)
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    if any(row[u] != zero for row in aug[r:]):
        return SolutionSpace(ring, u, None, [])
    part = [zero] * u
    for i, col in enumerate(pivots):
        part[col] = aug[i][u]
    basis = []
    pivset = set(pivots)
    for fcol in range(u):
        if fcol in pivset:
            continue
        v = [zero] * u
        v[fcol] = one
        for i, col in enumerate(pivots):
            v[col] = neg(aug[i][fcol])
        basis.append(tuple(v))
    return SolutionSpace(ring, u, tuple(part), basis)


# -- Smith normal form over Z ---------------------------------------------

def _snf(A: list[list[int]], track_inverses: bool = False):
    """Return (P, S, Q, Pi, Qi) with P A Q = S, Pi = P^-1, Qi = Q^-1.

    S is diagonal with nonnegative entries forming a divisibility chain.
    Inverses are only tracked when asked for (None otherwise).
    """
    r = len(A)
    c = len(A[0]) if r else 0
    S = [list(row) for row in A]
    P = [[int(i == j) for j in range(r)] for i in range(r)]
    Q = [[int(i == j) for j in range(c)] for i in range(c)]
    Pi = [row[:] for row in P] if track_inverses else None
    Qi = [row[:] for row in Q] if track_inverses else None

    def row_swap(i, j):
        if i == j:
            return
        S[i], S[j] = S[j], S[i]
        P[i], P[j] = P[j], P[i]
        if Pi is not None:
            for row in Pi:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        if i == j:
            return
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]
        if Qi is not None:
            Qi[i], Qi[j] = Qi[j], Qi[i]

    def row_addmul(i, t, q):        # row_i -= q * row_t
        si, st = S[i], S[t]
        for k in range(c):
            if st[k]:
                si[k] -= q * st[k]
        pi, pt = P[i], P[t]
        for k in range(r):
            if pt[k]:
                pi[k] -= q * pt[k]
        if Pi is not None:
            for row in Pi:
                if row[i]:
                    row[t] += q * row[i]

    def col_addmul(j, t, q):        # col_j -= q * col_t
        for row in S:
            if row[t]:
                row[j] -= q * row[t]
        for row in Q:
            if row[t]:
                row[j] -= q * row[t]
        if Qi is not None:
            qj, qt = Qi[j], Qi[t]
            for k in range(c):
                if qj[k]:
                    qt[k] += q * qj[k]

    def row_negate(i):
        S[i] = [-x for x in S[i]]
        P[i] = [-x for x in P[i]]
        if Pi is not None:
            for row in Pi:
                row[i] = -row[i]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                v = S[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        row_swap(t, best[1])
        col_swap(t, best[2])
        while True:
            piv = S[t][t]
            dirty = False
            for i in range(t + 1, r):
                if S[i][t]:
                    row_addmul(i, t, S[i][t] // piv)
                    if S[i][t]:
                        dirty = True
            for j in range(t + 1, c):
                if S[t][j]:
                    col_addmul(j, t, S[t][j] // piv)
                    if S[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder onto the pivot and repeat
                cand = [(abs(S[i][t]), i, t) for i in range(t + 1, r) if S[i][t]]
                cand += [(abs(S[t][j]), t, j) for j in range(t + 1, c) if S[t][j]]
                _, i, j = min(cand)
                row_swap(t, i)
                col_swap(t, j)
                continue
            bad = next((i for i in range(t + 1, r)
                        if any(S[i][j] % piv for j in range(t + 1, c))), None)
            if bad is None:
                break
            row_addmul(t, bad, -1)      # row_t += row_bad, then re-reduce
        if S[t][t] < 0:
            row_negate(t)
        t += 1
    return P, S, Q, Pi, Qi


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """(U, S, V) with A = U S V, U and V unimodular, S in Smith form."""
    if A.ring.kind != "integers":
        raise RingError("Smith normal form needs an integer matrix")
    _, S, _, Pi, Qi = _snf(A.rows(), track_inverses=True)
    ring = A.ring
    r, c = A.n_rows, A.n_cols
    return (Matrix(ring, r, r, tuple(v for row in Pi for v in row)),
            Matrix(ring, r, c, tuple(v for row in S for v in row)),
            Matrix(ring, c, c, tuple(v for row in Qi for v in row)))


def _solve_integers(ring: Ring, rows: list[list[int]], rhs: list[int], u: int) -> SolutionSpace:
    if not rows:
        return SolutionSpace(ring, u, (0,) * u, [tuple(int(i == j) for j in range(u)) for i in range(u)])
    P, S, Q, _, _ = _snf(rows)
    r = len(rows)
    c = [sum(p * v for p, v in zip(P[i], rhs)) for i in range(r)]
    rank = sum(1 for i in range(min(r, u)) if S[i][i])
    y = [0] * u
    for i in range(r):
        if i < rank:
            if c[i] % S[i][i]:
                return SolutionSpace(ring, u, None, [])
            y[i] = c[i] // S[i][i]
        elif c[i]:
            return SolutionSpace(ring, u, None, [])
    x = tuple(sum(Q[k][i] * y[i] for i in range(rank)) for k in range(u))
    basis = [tuple(Q[k][i] for k in range(u)) for i in range(rank, u)]
    return SolutionSpace(ring, u, x, basis)


def _solve_mod(ring: Ring, rows: list[list[int]], rhs: list[int], u: int) -> SolutionSpace:
    """Z/m via the integer system [A | m I] (z, t) = b."""
    m = ring.modulus
    e = len(rows)
    if not e:
        return SolutionSpace(ring, u, (0,) * u, [tuple(int(i == j) for j in range(u)) for i in range(u)])
    lifted = [list(row) + [m if k == i else 0 for k in range(e)] for i, row in enumerate(rows)]
    zring = ring_make({"kind": "integers"})
    sol = _solve_integers(zring, lifted, list(rhs), u + e)
    if not sol.solvable:
        return SolutionSpace(ring, u, None, [])
    part = tuple(v % m for v in sol.particular[:u])
    gens: list[tuple] = []
    seen = set()
    for h in sol.homogeneous:
        g = tuple(v % m for v in h[:u])
        if any(g) and g not in seen:
            seen.add(g)
            gens.append(g)
    return SolutionSpace(ring, u, part, gens)


def matrix_rank_field(A: Matrix) -> int:
    sol = _solve_field(A.ring, A.rows(), [A.ring.zero] * A.n_rows, A.n_cols)
    return A.n_cols - len(sol.homogeneous)
