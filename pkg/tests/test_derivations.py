import itertools
import random

import pytest
from hypothesis import given, strategies as st

from derivlab.derivations import (InnerDerivation, WitnessSystem, canonicalize, centralizer, inner_apply,
                                  inner_equal, joint_solve, sylvester_matrix, sylvester_solve)
from derivlab.localcheck import random_matrix
from derivlab.matrices import Matrix, ShapeError, sym_unit, unit
from derivlab.scalars import RingError, ring_make

from oracles import all_matrices, brute_solutions, brute_solvable

Q, GF2, GF3, GF5 = (ring_make(s) for s in ("Q", "GF(2)", "GF(3)", "GF(5)"))
SUPPORTED = ["GF(2)", "GF(3)", "GF(5)", "GF(4)", "GF(9)", "Q", "Z", "Z/4", "Z/6", "Z/9"]


def test_inner_apply_examples():
    for r in (Q, GF3, ring_make("Z/4")):
        e11, e12, e21 = unit(r, 2, 1, 1), unit(r, 2, 1, 2), unit(r, 2, 2, 1)
        assert inner_apply(e11, e12) == e12
        assert inner_apply(e11, e21) == -e21
        assert inner_apply(Matrix.identity(r, 2), e12 + e21).is_zero
    with pytest.raises(ShapeError):
        inner_apply(Matrix.zeros(Q, 2), Matrix.zeros(Q, 3))


def test_canonicalize_and_equal():
    assert canonicalize(Matrix.identity(Q, 3)).is_zero
    e12 = unit(Q, 2, 1, 2)
    assert canonicalize(e12) == e12
    assert canonicalize(Matrix.from_rows(GF5, [[2, 1], [0, 3]])) == Matrix.from_rows(GF5, [[0, 1], [0, 1]])
    assert inner_equal(e12, e12 + Matrix.identity(Q, 2))
    assert not inner_equal(e12, unit(Q, 2, 2, 1))
    assert inner_equal(Matrix.zeros(Q, 2), Matrix.identity(Q, 2))
    d = InnerDerivation.of(Matrix.from_rows(GF5, [[2, 1], [0, 3]]))
    assert d.canonical and d(Matrix.identity(GF5, 2)).is_zero
    with pytest.raises(ValueError):
        InnerDerivation(Matrix.identity(Q, 2), canonical=True)


def test_sylvester_examples():
    x = y = unit(GF2, 2, 1, 2)
    sol = sylvester_solve(x, y)
    assert sol.solvable
    sols = brute_solutions(x, y)
    assert len(sols) == 4
    assert all(a[1, 0] == 0 and GF2.sub(a[0, 0], a[1, 1]) == 1 for a in sols)
    assert unit(GF2, 2, 1, 1) in sols
    assert Matrix(GF2, 2, 2, sol.particular) in sols
    s = sym_unit(Q, 2, 1, 2)
    assert not sylvester_solve(s, s).solvable


def test_joint_solve_examples():
    e11, e12 = unit(GF3, 2, 1, 1), unit(GF3, 2, 1, 2)
    sol = joint_solve(WitnessSystem([(e11, Matrix.zeros(GF3, 2)), (e12, e12)]))
    assert sol.solvable
    a = sol.particular_matrix(2)
    assert inner_apply(a, e11).is_zero and inner_apply(a, e12) == e12
    q12, q21 = unit(Q, 2, 1, 2), unit(Q, 2, 2, 1)
    assert not joint_solve([(q12, q12), (q21, q21)]).solvable
    x, y = sym_unit(GF3, 2, 1, 2), unit(GF3, 2, 1, 2) - unit(GF3, 2, 2, 1)
    assert joint_solve([(x, y)]) == sylvester_solve(x, y)
    with pytest.raises(RingError):
        WitnessSystem([(e11, e11), (unit(Q, 2, 1, 1), unit(Q, 2, 1, 1))])
    with pytest.raises(ShapeError):
        WitnessSystem([(e11, e11), (unit(GF3, 3, 1, 1), unit(GF3, 3, 1, 1))])


def test_centralizer_examples():
    sol = centralizer(Matrix.identity(Q, 3))
    assert len(sol.homogeneous) == 9
    e11 = unit(GF2, 2, 1, 1)
    sols = brute_solutions(e11, Matrix.zeros(GF2, 2))
    assert len(sols) == 4 and all(a[0, 1] == 0 and a[1, 0] == 0 for a in sols)
    span = {centralizer(e11).combine(c) for c in itertools.product((0, 1), repeat=len(centralizer(e11).homogeneous))}
    assert span == {a.entries for a in sols}
    x = sym_unit(Q, 2, 1, 2)
    sol = centralizer(x)
    assert sol.solvable
    assert inner_apply(x, x).is_zero


def test_sylvester_matrix_matches_inner_apply():
    rng = random.Random(5)
    for r in (Q, GF5, ring_make("Z/6")):
        for n in (1, 2, 3):
            x, a = random_matrix(r, n, rng), random_matrix(r, n, rng)
            S = sylvester_matrix(x)
            v = S @ Matrix(r, n * n, 1, a.entries)
            assert v.entries == inner_apply(a, x).entries


@pytest.mark.parametrize("spec", ["GF(2)", "GF(3)", "Z/4"])
def test_sylvester_verdict_matches_exhaustive(spec):
    r = ring_make(spec)
    rng = random.Random(2)
    for _ in range(60):
        x, y = random_matrix(r, 2, rng), random_matrix(r, 2, rng)
        if rng.random() < 0.5:
            y = inner_apply(random_matrix(r, 2, rng), x)
        assert sylvester_solve(x, y).solvable == brute_solvable(x, y)


def test_centralizer_gf2_exhaustive_n2():
    # every x in M_2(GF(2)): the returned span equals the brute-force centralizer
    for x in all_matrices(GF2, 2):
        sol = centralizer(x)
        span = {sol.combine(c) for c in itertools.product((0, 1), repeat=len(sol.homogeneous))}
        assert span == {a.entries for a in brute_solutions(x, Matrix.zeros(GF2, 2))}


@st.composite
def triples(draw):
    r = ring_make(draw(st.sampled_from(SUPPORTED)))
    n = draw(st.integers(1, 4))
    rnd = draw(st.randoms(use_true_random=False))
    return r, [random_matrix(r, n, rnd) for _ in range(3)], r.random(rnd)


@given(triples())
def test_leibniz_and_linearity(data):
    r, (a, x, y), c = data
    assert inner_apply(a, x @ y) == inner_apply(a, x) @ y + x @ inner_apply(a, y)
    assert inner_apply(a, x + y) == inner_apply(a, x) + inner_apply(a, y)
    assert inner_apply(a, x.scale(c)) == inner_apply(a, x).scale(c)


@given(triples())
def test_solutions_satisfy(data):
    r, (a, x, _), c = data
    y = inner_apply(a, x)
    sol = sylvester_solve(x, y)
    assert sol.solvable
    assert inner_apply(sol.particular_matrix(x.n), x) == y
    for h in sol.homogeneous:
        b = Matrix(r, x.n, x.n, tuple(r.add(p, r.mul(c, v)) for p, v in zip(sol.particular, h)))
        assert inner_apply(b, x) == y


@given(triples())
def test_inner_equal_iff_units_agree(data):
    r, (a, b, _), c = data
    n = a.n
    for cand in (b, a + Matrix.identity(r, n).scale(c)):
        agree = all(inner_apply(a, unit(r, n, i, j)) == inner_apply(cand, unit(r, n, i, j))
                    for i in range(1, n + 1) for j in range(1, n + 1))
        assert inner_equal(a, cand) == agree
