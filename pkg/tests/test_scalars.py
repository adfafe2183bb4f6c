from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from derivlab.scalars import (InfiniteRing, NotInvertible, RingError, RingSpec, enumerate_scalars, is_irreducible,
                              is_prime, parse_ring, ring_make, scalar, scalar_add, scalar_inv, scalar_mul,
                              scalar_neg)

from oracles import brute_units

RINGS = ["GF(2)", "GF(3)", "GF(5)", "GF(7)", "GF(4)", "GF(8)", "GF(9)", "GF(16)", "Z/4", "Z/6", "Z/9", "Z/12", "Z", "Q"]


def test_ring_make_basic():
    r = ring_make({"kind": "prime-field", "p": 5})
    assert (r.characteristic, r.cardinality) == (5, 5)
    r = ring_make({"kind": "integers-mod", "m": 4})
    assert (r.characteristic, r.cardinality) == (4, 4)
    with pytest.raises(RingError):
        ring_make({"kind": "prime-field", "p": 6})
    with pytest.raises(RingError):
        ring_make({"kind": "integers-mod", "m": 1})
    with pytest.raises(RingError):
        ring_make({"kind": "extension-field", "p": 2, "k": 2, "modulus": [1, 0, 1]})


def test_parse_forms():
    assert str(parse_ring("GF(5)")) == "GF(5)"
    assert ring_make("GF(4)") == ring_make("GF(2^2)")
    assert ring_make("GF(4)").spec.modulus == (1, 1, 1)
    assert str(parse_ring("Z/4")) == "Z/4"
    assert ring_make("Q").kind == "rationals"
    assert ring_make("Z").kind == "integers"
    with pytest.raises(RingError):
        parse_ring("GF(6)")


@pytest.mark.parametrize("spec", RINGS)
def test_spec_json_roundtrip(spec):
    r = ring_make(spec)
    assert ring_make(RingSpec.from_json(r.spec.to_json())) == r


def test_scalar_examples():
    g3, q, z4, g5 = ring_make("GF(3)"), ring_make("Q"), ring_make("Z/4"), ring_make("GF(5)")
    assert scalar_add(scalar(g3, 2), scalar(g3, 2)).value == 1
    assert scalar_mul(scalar(q, Fraction(1, 2)), scalar(q, Fraction(2, 3))).value == Fraction(1, 3)
    assert scalar_mul(scalar(z4, 2), scalar(z4, 2)).value == 0
    assert scalar_inv(scalar(g5, 2)).value == 3
    assert scalar_inv(scalar(q, Fraction(3, 7))).value == Fraction(7, 3)
    with pytest.raises(NotInvertible):
        scalar_inv(scalar(z4, 2))
    assert scalar_neg(scalar(g3, 1)).value == 2
    with pytest.raises(RingError):
        scalar_add(scalar(g3, 1), scalar(g5, 1))


def test_enumerate():
    assert [s.value for s in enumerate_scalars(ring_make("GF(2)"))] == [0, 1]
    assert [s.value for s in enumerate_scalars(ring_make("Z/4"))] == [0, 1, 2, 3]
    with pytest.raises(InfiniteRing):
        enumerate_scalars(ring_make("Q"))


@pytest.mark.parametrize("spec", [s for s in RINGS if s not in ("Z", "Q")])
def test_finite_ring_closed_and_units(spec):
    r = ring_make(spec)
    E = r.elements()
    assert len(E) == r.cardinality == len(set(E))
    S = set(E)
    for a in E:
        for b in E:
            assert r.add(a, b) in S and r.mul(a, b) in S
    units = brute_units(r)
    for a in E:
        assert r.is_unit(a) == (a in units)
        if a in units:
            assert r.mul(a, r.inv(a)) == r.one


def _poly_mul_oracle(r, a, b):
    """Schoolbook product of digit vectors reduced by the modulus polynomial."""
    p, k, mod = r.p, r.k, r.spec.modulus
    da, db = r.to_prime(a), r.to_prime(b)
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for t in range(k + 1):
                prod[d - k + t] = (prod[d - k + t] - c * mod[t]) % p
    return r.from_prime(prod[:k])


@pytest.mark.parametrize("spec", ["GF(4)", "GF(8)", "GF(9)", "GF(25)", "GF(16)"])
def test_extension_tables_match_polynomials(spec):
    r = ring_make(spec)
    for a in r.elements():
        for b in r.elements():
            assert r.mul(a, b) == _poly_mul_oracle(r, a, b)


def test_primality_and_irreducibility():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2 ** 61 - 1) and not is_prime(2 ** 61 + 1)
    assert is_irreducible((1, 1, 1), 2) and not is_irreducible((1, 0, 1), 2)
    assert is_irreducible((1, 1, 0, 1), 2)


@st.composite
def ring_and_elems(draw, count=3):
    spec = draw(st.sampled_from(RINGS))
    r = ring_make(spec)
    if r.is_finite:
        el = st.integers(0, r.cardinality - 1)
    elif r.kind == "integers":
        el = st.integers(-10 ** 6, 10 ** 6)
    else:
        el = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 10 ** 6)
    return r, [r.normalize(draw(el)) for _ in range(count)]


@given(ring_and_elems())
def test_ring_axioms(data):
    r, (x, y, z) = data
    assert r.add(r.add(x, y), z) == r.add(x, r.add(y, z))
    assert r.mul(r.mul(x, y), z) == r.mul(x, r.mul(y, z))
    assert r.add(x, y) == r.add(y, x)
    assert r.mul(x, y) == r.mul(y, x)
    assert r.mul(x, r.add(y, z)) == r.add(r.mul(x, y), r.mul(x, z))
    assert r.add(x, r.neg(x)) == r.zero
    assert r.mul(x, r.one) == x


@given(ring_and_elems(1))
def test_format_parse_roundtrip(data):
    r, (x,) = data
    assert r.parse(r.format(x)) == x


@given(ring_and_elems(1))
def test_prime_coordinates_roundtrip(data):
    r, (x,) = data
    assert r.from_prime(r.to_prime(x)) == x
