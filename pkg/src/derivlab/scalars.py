"""Exact scalar rings: GF(p), GF(p^k), Q, Z and Z/m.

Ring elements are stored as plain Python values so that matrix code can do
arithmetic without wrapper overhead:

* prime fields and Z/m: ``int`` in ``[0, modulus)``
* integers: ``int``
* rationals: :class:`fractions.Fraction`
* extension fields: ``int`` code whose base-p digits are the polynomial
  coefficients, lowest degree first

:class:`Scalar` wraps a raw value together with its ring for callers that
want operator syntax.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

KINDS = ("prime-field", "extension-field", "rationals", "integers", "integers-mod")


class RingError(ValueError):
    """Invalid ring specification or mixed-ring arithmetic."""


class NotInvertible(ArithmeticError):
    """Raised by :meth:`Ring.inv` for non-units."""


class InfiniteRing(RingError):
    """An operation needing a finite ring got Z or Q."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(m: int) -> list[tuple[int, int]]:
    """Prime-power factorisation of m >= 1 by trial division."""
    out = []
    q = 2
    while q * q <= m:
        if m % q == 0:
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            out.append((q, e))
        q += 1
    if m > 1:
        out.append((m, 1))
    return out


# -- polynomials over GF(p), coefficient lists low degree first -------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    b = _poly_trim([c % p for c in b])
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _poly_trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = [c % p for c in poly]
    deg = len(_poly_trim(list(poly))) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree k over GF(p)."""
    for low in itertools.product(range(p), repeat=k):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise RingError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True)
class RingSpec:
    kind: str
    p: int | None = None
    k: int = 1
    m: int | None = None
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.modulus is not None and not isinstance(self.modulus, tuple):
            object.__setattr__(self, "modulus", tuple(self.modulus))

    def to_json(self) -> dict:
        if self.kind == "prime-field":
            return {"kind": self.kind, "p": self.p}
        if self.kind == "integers-mod":
            return {"kind": self.kind, "m": self.m}
        if self.kind == "extension-field":
            return {"kind": self.kind, "p": self.p, "k": self.k, "modulus": list(self.modulus or ())}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, d: dict) -> "RingSpec":
        if not isinstance(d, dict) or d.get("kind") not in KINDS:
            raise RingError(f"bad ring spec: {d!r}")
        kind = d["kind"]
        if kind == "prime-field":
            return cls(kind, p=int(d["p"]))
        if kind == "integers-mod":
            return cls(kind, m=int(d["m"]))
        if kind == "extension-field":
            mod = d.get("modulus")
            return cls(kind, p=int(d["p"]), k=int(d["k"]),
                       modulus=tuple(int(c) for c in mod) if mod is not None else None)
        return cls(kind)

    def __str__(self) -> str:
        return {
            "prime-field": lambda: f"GF({self.p})",
            "extension-field": lambda: f"GF({self.p}^{self.k})",
            "rationals": lambda: "Q",
            "integers": lambda: "Z",
            "integers-mod": lambda: f"Z/{self.m}",
        }[self.kind]()


def parse_ring(text: str) -> RingSpec:
    """Parse ``GF(5)``, ``GF(2^2)``, ``Z/4``, ``Z``, ``Q`` or a JSON ring spec."""
    import json
    import re

    s = text.strip()
    if s.startswith("{"):
        return RingSpec.from_json(json.loads(s))
    t = s.replace(" ", "").upper()
    if t in ("Q", "QQ", "RATIONALS"):
        return RingSpec("rationals")
    if t in ("Z", "ZZ", "INTEGERS"):
        return RingSpec("integers")
    if mo := re.fullmatch(r"Z/(\d+)(Z)?", t):
        return RingSpec("integers-mod", m=int(mo.group(1)))
    if mo := re.fullmatch(r"GF\((\d+)\^(\d+)\)", t):
        return RingSpec("extension-field", p=int(mo.group(1)), k=int(mo.group(2)))
    if mo := re.fullmatch(r"GF\((\d+)\)", t):
        q = int(mo.group(1))
        if is_prime(q):
            return RingSpec("prime-field", p=q)
        fac = factorize(q)
        if len(fac) == 1:
            return RingSpec("extension-field", p=fac[0][0], k=fac[0][1])
        raise RingError(f"GF({q}): order is not a prime power")
    raise RingError(f"cannot parse ring {text!r}")


class Ring:
    """Arithmetic on raw values of one ring.  Build with :func:`ring_make`."""

    def __init__(self, spec: RingSpec):
        kind = spec.kind
        if kind not in KINDS:
            raise RingError(f"unknown ring kind {kind!r}")
        self.kind = kind
        self.k = 1
        self.modulus: int | None = None     # integer modulus for residue rings
        if kind in ("prime-field", "extension-field"):
            if spec.p is None or not is_prime(spec.p):
                raise RingError(f"{spec.p} is not prime")
            self.p = spec.p
        if kind == "prime-field":
            self.modulus = spec.p
        elif kind == "integers-mod":
            if spec.m is None or spec.m < 2:
                raise RingError("integers-mod needs m >= 2")
            self.modulus = spec.m
        elif kind == "extension-field":
            k = spec.k
            if not 1 <= k <= 4:
                raise RingError("extension degree must be between 1 and 4")
            poly = spec.modulus if spec.modulus is not None else default_modulus(spec.p, k)
            poly = tuple(int(c) % spec.p for c in poly)
            if len(poly) != k + 1 or poly[-1] != 1:
                raise RingError(f"modulus {list(poly)} is not monic of degree {k}")
            if not is_irreducible(poly, spec.p):
                raise RingError(f"modulus {list(poly)} is reducible over GF({spec.p})")
            spec = RingSpec(kind, p=spec.p, k=k, modulus=poly)
            self.k = k
            self._setup_extension(poly)
        self.spec = spec
        self.zero = Fraction(0) if kind == "rationals" else 0
        self.one = Fraction(1) if kind == "rationals" else 1

    # -- extension field tables ------------------------------------------
    def _setup_extension(self, poly: tuple[int, ...]) -> None:
        p, k = self.p, len(poly) - 1
        q = p ** k
        self.q = q
        self._digits = [tuple((c // p ** r) % p for r in range(k)) for c in range(q)]
        self._pw = [p ** r for r in range(k)]

        def polymul(a, b):
            prod = [0] * (2 * k - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] += x * y
            rem = _poly_mod(prod, list(poly), p)
            return self._encode(rem + [0] * (k - len(rem)))

        # log/antilog tables via a primitive element
        for g in range(2, q) if q > 2 else [1]:
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = polymul(self._digits[x], self._digits[g])
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                break
        self._exp = exp + exp
        self._log = {v: i for i, v in enumerate(exp)}

    def _encode(self, digits: Sequence[int]) -> int:
        return sum(d * w for d, w in zip(digits, self._pw))

    # -- basic properties -------------------------------------------------
    @property
    def is_field(self) -> bool:
        return self.kind in ("prime-field", "extension-field", "rationals")

    @property
    def is_finite(self) -> bool:
        return self.kind in ("prime-field", "extension-field", "integers-mod")

    @property
    def characteristic(self) -> int:
        if self.kind in ("rationals", "integers"):
            return 0
        return self.p if self.kind == "extension-field" else self.modulus

    @property
    def cardinality(self) -> int | None:
        if self.kind == "extension-field":
            return self.q
        return self.modulus

    @property
    def prime_modulus(self) -> int | None:
        """Modulus of the prime subring (None for Z and Q)."""
        return self.characteristic or None

    def prime_ring(self) -> "Ring":
        """The subring generated by 1: GF(p) for GF(p^k), itself otherwise."""
        if self.kind == "extension-field":
            return ring_make(RingSpec("prime-field", p=self.p))
        return self

    def __eq__(self, other):
        return isinstance(other, Ring) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"Ring({self.spec})"

    def __reduce__(self):
        return (ring_make, (self.spec,))

    # -- arithmetic on raw values ------------------------------------------
    def normalize(self, v: Any):
        """Canonical form of a Python number (int or Fraction) in this ring."""
        kind = self.kind
        if kind == "rationals":
            return Fraction(v)
        if kind == "integers":
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise RingError(f"{v} is not an integer")
                v = v.numerator
            return int(v)
        if kind == "extension-field":
            return self.from_int(v)
        if isinstance(v, Fraction):
            return v.numerator * pow(v.denominator, -1, self.modulus) % self.modulus
        return v % self.modulus

    def from_int(self, n: int):
        if self.kind == "extension-field":
            return n % self.p
        return self.normalize(n)

    def add(self, a, b):
        if self.kind == "extension-field":
            if self.p == 2:
                return a ^ b
            da, db = self._digits[a], self._digits[b]
            return self._encode([(x + y) % self.p for x, y in zip(da, db)])
        if self.modulus is not None:
            return (a + b) % self.modulus
        return a + b

    def neg(self, a):
        if self.kind == "extension-field":
            if self.p == 2:
                return a
            return self._encode([(-x) % self.p for x in self._digits[a]])
        if self.modulus is not None:
            return (-a) % self.modulus
        return -a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.kind == "extension-field":
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        if self.modulus is not None:
            return a * b % self.modulus
        return a * b

    def is_unit(self, a) -> bool:
        kind = self.kind
        if kind == "integers":
            return a in (1, -1)
        if kind in ("rationals", "extension-field"):
            return a != 0
        import math
        return math.gcd(a, self.modulus) == 1

    def inv(self, a):
        if not self.is_unit(a):
            raise NotInvertible(f"{self.format(a)} is not invertible in {self.spec}")
        kind = self.kind
        if kind == "integers":
            return a
        if kind == "rationals":
            return 1 / a
        if kind == "extension-field":
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return pow(a, -1, self.modulus)

    def elements(self) -> list:
        """Every element once, in increasing raw-value order."""
        if not self.is_finite:
            raise InfiniteRing(f"{self.spec} is infinite")
        return list(range(self.cardinality))

    def random(self, rng: random.Random, bound: int = 9):
        """Uniform on finite rings; small entries on Z and Q."""
        if self.is_finite:
            return rng.randrange(self.cardinality)
        num = rng.randint(-bound, bound)
        if self.kind == "integers":
            return num
        return Fraction(num, rng.randint(1, 3))

    # -- prime-ring coordinates (GF(p)-basis 1, t, ..., t^(k-1)) ------------
    def to_prime(self, a) -> tuple:
        if self.kind == "extension-field":
            return self._digits[a]
        return (a,)

    def from_prime(self, coords: Sequence) -> Any:
        if self.kind == "extension-field":
            return self._encode([c % self.p for c in coords])
        return coords[0]

    def generator_powers(self) -> list:
        """Raw values of 1, t, ..., t^(k-1)."""
        if self.kind == "extension-field":
            return [self.p ** r for r in range(self.k)]
        return [self.one]

    # -- serialization ----------------------------------------------------
    def format(self, a) -> Any:
        if self.kind == "extension-field":
            return list(self._digits[a])
        return str(a)

    def parse(self, v: Any):
        if self.kind == "extension-field":
            if isinstance(v, list):
                if len(v) > self.k:
                    raise RingError(f"too many coefficients: {v}")
                return self._encode([int(c) % self.p for c in v] + [0] * (self.k - len(v)))
            return self.from_int(int(v))
        if isinstance(v, str):
            v = v.strip()
            if self.kind == "rationals":
                return Fraction(v)
            if "/" in v:
                return self.normalize(Fraction(v))
            return self.normalize(int(v))
        if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
            raise RingError(f"cannot read scalar {v!r}")
        return self.normalize(v)


@functools.lru_cache(maxsize=None)
def _ring_cached(spec: RingSpec) -> Ring:
    return Ring(spec)


def ring_make(spec: RingSpec | dict | str) -> Ring:
    """Validated, cached ring handle for ``spec``."""
    if isinstance(spec, dict):
        spec = RingSpec.from_json(spec)
    elif isinstance(spec, str):
        spec = parse_ring(spec)
    if spec.kind == "extension-field" and spec.modulus is None:
        if spec.p is None or not is_prime(spec.p):
            raise RingError(f"{spec.p} is not prime")
        if not 1 <= spec.k <= 4:
            raise RingError("extension degree must be between 1 and 4")
        spec = RingSpec(spec.kind, p=spec.p, k=spec.k, modulus=default_modulus(spec.p, spec.k))
    return _ring_cached(spec)


@dataclass(frozen=True)
class Scalar:
    ring: Ring
    value: Any

    def _check(self, other: "Scalar") -> None:
        if not isinstance(other, Scalar) or other.ring != self.ring:
            raise RingError("ring mismatch")

    def __add__(self, other):
        self._check(other)
        return Scalar(self.ring, self.ring.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return Scalar(self.ring, self.ring.sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return Scalar(self.ring, self.ring.mul(self.value, other.value))

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def inv(self) -> "Scalar":
        return Scalar(self.ring, self.ring.inv(self.value))

    def __repr__(self):
        return f"Scalar({self.ring.format(self.value)} in {self.ring.spec})"


def scalar(ring: Ring, v) -> Scalar:
    return Scalar(ring, ring.parse(v) if isinstance(v, (str, list)) else ring.normalize(v))


def scalar_add(x: Scalar, y: Scalar) -> Scalar:
    return x + y


def scalar_mul(x: Scalar, y: Scalar) -> Scalar:
    return x * y


def scalar_neg(x: Scalar) -> Scalar:
    return -x


def scalar_inv(x: Scalar) -> Scalar:
    """Inverse of x; raises :class:`NotInvertible` for non-units."""
    return x.inv()


def enumerate_scalars(ring: Ring) -> list[Scalar]:
    return [Scalar(ring, v) for v in ring.elements()]
