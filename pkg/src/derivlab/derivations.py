"""Inner derivations x -> ax - xa and the witness equations they give rise to.

Unknown implementers are vectorized row-major: entry a[k, l] is unknown
number ``k * n + l``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .matrices import Matrix, ShapeError, SolutionSpace, solve_linear
from .scalars import RingError


def inner_apply(a: Matrix, x: Matrix) -> Matrix:
    """D_a(x) = ax - xa."""
    if a.n_rows != a.n_cols or (x.n_rows, x.n_cols) != (a.n_rows, a.n_cols):
        raise ShapeError("inner_apply needs square matrices of equal size")
    return a @ x - x @ a


def canonicalize(a: Matrix) -> Matrix:
    """Subtract a[1,1] * I so the (1,1) entry is zero; same inner derivation."""
    n = a.n
    ring = a.ring
    c = a[0, 0]
    if c == ring.zero:
        return a
    return a - Matrix.identity(ring, n).scale(c)


def inner_equal(a: Matrix, b: Matrix) -> bool:
    """True iff D_a = D_b, i.e. a - b is central (a scalar matrix)."""
    return canonicalize(a) == canonicalize(b)


@dataclass(frozen=True)
class InnerDerivation:
    implementer: Matrix
    canonical: bool = False

    @classmethod
    def of(cls, a: Matrix) -> "InnerDerivation":
        return cls(canonicalize(a), True)

    def __post_init__(self):
        if self.canonical and self.implementer[0, 0] != self.implementer.ring.zero:
            raise ValueError("canonical implementer must have zero (1,1) entry")

    def __call__(self, x: Matrix) -> Matrix:
        return inner_apply(self.implementer, x)


def sylvester_rows(x: Matrix) -> list[list]:
    """Rows of the n^2 x n^2 matrix of a -> ax - xa.

    Row (i, j), column (k, l) holds delta_ik x_lj - x_ik delta_lj.
    """
    n = x.n
    ring = x.ring
    zero = ring.zero
    sub = ring.sub
    X = x.rows()
    rows = []
    for i in range(n):
        for j in range(n):
            row = [zero] * (n * n)
            for l in range(n):
                row[i * n + l] = X[l][j]
            for k in range(n):
                idx = k * n + j
                row[idx] = sub(row[idx], X[i][k])
            rows.append(row)
    return rows


def sylvester_matrix(x: Matrix) -> Matrix:
    n = x.n
    return Matrix(x.ring, n * n, n * n, tuple(v for row in sylvester_rows(x) for v in row))


@dataclass
class WitnessSystem:
    """Constraints (x, y) asking for one a with ax - xa = y for every pair."""

    constraints: list[tuple[Matrix, Matrix]] = field(default_factory=list)

    def __post_init__(self):
        if self.constraints:
            x0 = self.constraints[0][0]
            for x, y in self.constraints:
                for m in (x, y):
                    if m.ring != x0.ring:
                        raise RingError("witness system mixes rings")
                    if (m.n_rows, m.n_cols) != (x0.n, x0.n):
                        raise ShapeError("witness system mixes dimensions")

    def add(self, x: Matrix, y: Matrix) -> "WitnessSystem":
        self.constraints.append((x, y))
        self.__post_init__()
        return self


def joint_solve(sys: WitnessSystem | list[tuple[Matrix, Matrix]]) -> SolutionSpace:
    """All a with inner_apply(a, x) = y for every constraint simultaneously."""
    constraints = sys.constraints if isinstance(sys, WitnessSystem) else list(sys)
    if not constraints:
        raise ValueError("empty witness system")
    WitnessSystem(list(constraints))   # validates
    x0 = constraints[0][0]
    n = x0.n
    rows: list[list] = []
    rhs: list = []
    for x, y in constraints:
        rows.extend(sylvester_rows(x))
        rhs.extend(y.entries)
    A = Matrix(x0.ring, len(rows), n * n, tuple(v for row in rows for v in row))
    return solve_linear(A, rhs)


def sylvester_solve(x: Matrix, y: Matrix) -> SolutionSpace:
    """The affine set {a : ax - xa = y}; unsolvable means no inner witness."""
    return joint_solve([(x, y)])


def centralizer(x: Matrix) -> SolutionSpace:
    return sylvester_solve(x, Matrix.zeros(x.ring, x.n))
