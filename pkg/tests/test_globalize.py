import random

import pytest
from hypothesis import given, strategies as st

from derivlab.derivations import canonicalize, inner_apply, inner_equal
from derivlab.engine import PointSet
from derivlab.globalize import (NotLocalInner, _patch, globalize_direct, globalize_stitch,
                                reconstruct_and_verify)
from derivlab.localcheck import (check_local_inner, gen_basis_patched, map_from_basis_images, map_from_inner,
                                 random_basis_patched, random_matrix, transpose_map, zero_map)
from derivlab.matrices import Matrix, unit
from derivlab.scalars import ring_make

Q, GF3, GF5 = ring_make("Q"), ring_make("GF(3)"), ring_make("GF(5)")
RINGS = ["GF(2)", "GF(3)", "GF(5)", "GF(4)", "GF(9)", "Q", "Z", "Z/4", "Z/6", "Z/9"]


def reject_example():
    a, z = unit(Q, 2, 1, 1), Matrix.zeros(Q, 2)
    return gen_basis_patched([z, a, -a, z])


def test_direct_examples():
    e12 = unit(Q, 3, 1, 2)
    assert globalize_direct(map_from_inner(e12)) == e12
    a = Matrix.from_rows(GF5, [[2, 1], [0, 3]])
    assert globalize_direct(map_from_inner(a)) == Matrix.from_rows(GF5, [[0, 1], [0, 1]])
    with pytest.raises(NotLocalInner) as exc:
        globalize_direct(reject_example())
    assert exc.value.stage == "direct"


def test_stitch_reject_fails_at_verify_on_e21():
    with pytest.raises(NotLocalInner) as exc:
        globalize_stitch(reject_example())
    assert exc.value.stage == "verify"
    assert exc.value.violation["unit"] == [2, 1]


def test_n1_only_zero_map():
    for spec in ("GF(3)", "Q", "Z/4"):
        r = ring_make(spec)
        assert globalize_direct(zero_map(r, 1)).is_zero
        assert globalize_stitch(zero_map(r, 1)).is_zero
        one = map_from_basis_images(r, 1, [Matrix.identity(r, 1)])
        with pytest.raises(NotLocalInner):
            globalize_direct(one)
        with pytest.raises(NotLocalInner):
            globalize_stitch(one)


def test_stitch_invariant_trace():
    rng = random.Random(4)
    for spec in ("GF(3)", "Q", "Z", "Z/6"):
        r = ring_make(spec)
        for n in (4, 5, 6):
            a = random_matrix(r, n, rng)
            f = map_from_inner(a)
            trace = []
            assert inner_equal(globalize_stitch(f, trace), a)
            assert [s.k for s in trace] == list(range(2, n))
            for s in trace:
                for i in range(1, s.k + 1):
                    e = unit(r, n, i, i + 1)
                    assert inner_apply(s.current, e) == f(e)
            if n > 3:
                assert set(trace[-1].pair_witnesses) == {(k, k + 1) for k in range(3, n)}


def test_patch_entry_sources():
    rng = random.Random(0)
    a, c = random_matrix(Q, 5, rng), random_matrix(Q, 5, rng)
    b = _patch(a, c, 3)       # K = 2, K1 = 3 in 0-based indices
    for i in range(5):
        for j in range(5):
            if j == 2 and i != 2:
                assert b[i, j] == c[i, j]          # column k
            elif i == 3 and j < 3:
                assert b[i, j] == c[i, j]          # row k+1, left part
            elif i >= 3 and j >= 3 and (i, j) != (3, 3):
                assert b[i, j] == c[i, j]          # lower-right block
            elif (i, j) != (3, 3):
                assert b[i, j] == a[i, j]
    assert b[3, 3] == c[3, 3] - c[2, 2] + a[2, 2]


@pytest.mark.parametrize("spec", RINGS)
def test_round_trip(spec):
    r = ring_make(spec)
    rng = random.Random(RINGS.index(spec))
    for n in (2, 3, 4):
        for _ in range(15):
            a = random_matrix(r, n, rng)
            f = map_from_inner(a)
            assert inner_equal(globalize_direct(f), a)
            assert inner_equal(globalize_stitch(f), a)
            assert globalize_direct(f) == canonicalize(a)


def test_reconstruct_examples():
    gf2 = ring_make("GF(2)")
    rng = random.Random(1)
    a = random_matrix(gf2, 2, rng)
    rep = reconstruct_and_verify(map_from_inner(a), PointSet.exhaustive())
    assert rep.status == "success" and rep.implementer == canonicalize(a)
    assert rep.points_verified == 16 and rep.paths_agree and rep.is_derivation
    rep = reconstruct_and_verify(zero_map(Q, 3))
    assert rep.implementer.is_zero
    z4 = ring_make("Z/4")
    a = Matrix.from_rows(z4, [[0, 1], [2, 3]])
    rep = reconstruct_and_verify(map_from_inner(a))
    assert rep.status == "success" and rep.implementer == a
    assert rep.to_json()["status"] == "success"
    bad = reconstruct_and_verify(reject_example()).to_json()
    assert bad == {"status": "failure", "stage": "direct", "violation": {"constraints": "all matrix units"}}


def test_globalize_rejects_transpose():
    for spec in ("GF(3)", "Q"):
        with pytest.raises(NotLocalInner):
            globalize_direct(transpose_map(ring_make(spec), 3))


def test_non_homogeneous_map_fails_verify():
    # over GF(4) a map can agree with an inner derivation on every unit but not on t*units
    r = ring_make("GF(4)")
    n = 2
    a = unit(r, n, 1, 1)
    t = r.generator_powers()[1]
    from derivlab import carriers
    imgs = []
    for b in carriers.basis(r, n, "full"):
        imgs += [inner_apply(a, b), Matrix.zeros(r, n)]    # t*b -> 0
    f = map_from_basis_images(r, n, imgs)
    assert inner_equal(globalize_direct(f), a)
    rep = reconstruct_and_verify(f)
    assert rep.status == "failure" and rep.stage == "verify"
    assert not check_local_inner(f).accepted
    assert f(unit(r, n, 1, 2).scale(t)).is_zero


@given(st.sampled_from(RINGS), st.integers(2, 5), st.randoms(use_true_random=False))
def test_paths_agree_on_inner(spec, n, rnd):
    r = ring_make(spec)
    a = random_matrix(r, n, rnd)
    f = map_from_inner(a)
    assert inner_equal(globalize_direct(f), globalize_stitch(f))


@given(st.sampled_from(["GF(2)", "GF(3)", "Q"]), st.randoms(use_true_random=False))
def test_patched_maps_fail_consistently(spec, rnd):
    # both paths either succeed with equal results or both fail
    r = ring_make(spec)
    f = random_basis_patched(r, 3, rnd)
    try:
        a = globalize_direct(f)
    except NotLocalInner:
        with pytest.raises(NotLocalInner):
            globalize_stitch(f)
    else:
        assert inner_equal(a, globalize_stitch(f))
