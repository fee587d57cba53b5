"""The three DVR backends and their exact elements.

* ``Zp``  -- integers localized at a prime p (mixed characteristic),
  elements are rationals with denominator prime to p;
* ``kt``  -- F_q[t] localized at (t) (equicharacteristic, perfect residue
  field), elements are ratios of polynomials in t with invertible
  denominator;
* ``kut`` -- F_p(u)[t] localized at (t): same shape but with the imperfect
  residue field F_p(u), which is what makes inseparable residue
  extensions reachable.

Valuations are exact integers, with a first-class infinity for zero
(an infinite discriminant valuation is a meaningful outcome, not an
error).
"""

from __future__ import annotations

from fractions import Fraction

from . import exprparse
from .errors import InputError
from .fields import ExtField, PrimeField, RationalFunctionField, finite_field
from .polys import Poly, PolyFraction, poly_str_compact


class _InfiniteValuation:
    """Singleton valuation of zero; bigger than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("dvrtrace-infinity")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self

    def __repr__(self):
        return "inf"

    __str__ = __repr__


INFINITY = _InfiniteValuation()


def valuation_to_json(v):
    return "inf" if v is INFINITY else v


class ZpScalar:
    """Element of Z localized at p: a rational with denominator prime to p."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: "ZpRing", value: Fraction):
        if value.denominator % ring.p == 0:
            raise InputError(
                f"{value} lies outside Z_({ring.p}): denominator divisible by {ring.p}")
        self.ring = ring
        self.value = value

    def __add__(self, other):
        return ZpScalar(self.ring, self.value + other.value)

    def __sub__(self, other):
        return ZpScalar(self.ring, self.value - other.value)

    def __neg__(self):
        return ZpScalar(self.ring, -self.value)

    def __mul__(self, other):
        return ZpScalar(self.ring, self.value * other.value)

    def __truediv__(self, other):
        if not other.value:
            raise ZeroDivisionError("division by zero scalar")
        return ZpScalar(self.ring, self.value / other.value)

    def __pow__(self, n: int):
        return ZpScalar(self.ring, self.value ** n)

    def __eq__(self, other):
        return isinstance(other, ZpScalar) and self.value == other.value \
            and self.ring.p == other.ring.p

    def __hash__(self):
        return hash((self.ring.p, self.value))

    def __bool__(self):
        return self.value != 0

    def valuation(self):
        if not self.value:
            return INFINITY
        n = self.value.numerator
        p = self.ring.p
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def reduce(self):
        k = self.ring.residue_field
        num = self.value.numerator % self.ring.p
        den_inv = pow(self.value.denominator, -1, self.ring.p)
        return k.from_int(num * den_inv)

    def unit_shift(self, k: int):
        """Divide by the k-th power of the uniformizer; requires v(x) >= k."""
        if self.valuation() < k:
            raise InputError(f"unit_shift by {k} exceeds valuation of {self}")
        return ZpScalar(self.ring, self.value / Fraction(self.ring.p) ** k)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Z_({self.ring.p})[{self.value}]"


class TLocalScalar:
    """Element of k[t] localized at (t): N(t)/D(t) with D(0) != 0."""

    __slots__ = ("ring", "frac")

    def __init__(self, ring: "TLocalRing", frac: PolyFraction):
        if not frac.num.is_zero() and not frac.den.coeff(0):
            raise InputError("denominator vanishes at t = 0: element not in the local ring")
        if frac.num.is_zero() and not frac.den.coeff(0):
            frac = PolyFraction.from_poly(Poly.zero(ring.residue_field))
        self.ring = ring
        self.frac = frac

    def __add__(self, other):
        return TLocalScalar(self.ring, self.frac + other.frac)

    def __sub__(self, other):
        return TLocalScalar(self.ring, self.frac - other.frac)

    def __neg__(self):
        return TLocalScalar(self.ring, -self.frac)

    def __mul__(self, other):
        return TLocalScalar(self.ring, self.frac * other.frac)

    def __truediv__(self, other):
        if not other.frac:
            raise ZeroDivisionError("division by zero scalar")
        return TLocalScalar(self.ring, self.frac / other.frac)

    def __pow__(self, n: int):
        return TLocalScalar(self.ring, self.frac ** n)

    def __eq__(self, other):
        return isinstance(other, TLocalScalar) and self.frac == other.frac \
            and self.ring == other.ring

    def __hash__(self):
        return hash((self.ring.kind, self.frac))

    def __bool__(self):
        return bool(self.frac)

    def valuation(self):
        if not self.frac:
            return INFINITY
        for i, c in enumerate(self.frac.num.coeffs):
            if c:
                return i
        return INFINITY  # pragma: no cover

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def reduce(self):
        if not self.frac:
            return self.ring.residue_field.zero
        return self.frac.num.coeff(0) / self.frac.den.coeff(0)

    def unit_shift(self, k: int):
        if self.valuation() < k:
            raise InputError(f"unit_shift by {k} exceeds valuation of {self}")
        if not self.frac:
            return self
        shifted = Poly(self.frac.num.field, self.frac.num.coeffs[k:])
        return TLocalScalar(self.ring, PolyFraction(shifted, self.frac.den, _normalized=True))

    def __str__(self):
        num = poly_str_compact(self.frac.num, "t")
        if self.frac.is_polynomial():
            return num
        den = poly_str_compact(self.frac.den, "t")
        if "+" in num or "/" in num or "-" in num[1:]:
            num = f"({num})"
        return f"{num}/({den})"

    def __repr__(self):
        return f"{self.ring.kind}[{self}]"


class ZpRing:
    """Z localized at the prime p."""

    kind = "Zp"

    def __init__(self, p: int):
        self.p = p
        self.residue_field = PrimeField(p)  # validates primality
        self.char_pair = (0, p)
        self.zero = ZpScalar(self, Fraction(0))
        self.one = ZpScalar(self, Fraction(1))
        self.uniformizer = ZpScalar(self, Fraction(p))

    @property
    def residue_char(self) -> int:
        return self.p

    def from_int(self, n: int) -> ZpScalar:
        return ZpScalar(self, Fraction(n))

    def lift(self, a) -> ZpScalar:
        """Canonical lift of a residue element (the 0..p-1 representative)."""
        return self.from_int(a.value)

    def parse(self, text) -> ZpScalar:
        if isinstance(text, int):
            return self.from_int(text)
        value = exprparse.evaluate(str(text), {}, lambda n: Fraction(n))
        if not isinstance(value, Fraction):
            raise InputError(f"{text!r} is not a rational scalar")
        return ZpScalar(self, value)

    def describe(self) -> dict:
        return {"kind": "Zp", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, ZpRing) and other.p == self.p

    def __hash__(self):
        return hash(("Zp", self.p))

    def __repr__(self):
        return f"ZpRing({self.p})"


class TLocalRing:
    """k[t] localized at (t) for k a finite field or F_p(u)."""

    def __init__(self, residue_field):
        self.residue_field = residue_field
        self.kind = "kut" if isinstance(residue_field, RationalFunctionField) else "kt"
        p = residue_field.char
        self.char_pair = (p, p)
        k = residue_field
        self.zero = TLocalScalar(self, PolyFraction.from_poly(Poly.zero(k)))
        self.one = TLocalScalar(self, PolyFraction.from_poly(Poly.one(k)))
        self.uniformizer = TLocalScalar(self, PolyFraction.from_poly(Poly.x(k)))

    @property
    def residue_char(self) -> int:
        return self.residue_field.char

    def from_int(self, n: int) -> TLocalScalar:
        return self.lift(self.residue_field.from_int(n))

    def lift(self, a) -> TLocalScalar:
        return TLocalScalar(self, PolyFraction.from_poly(
            Poly.constant(self.residue_field, a)))

    def parse(self, text) -> TLocalScalar:
        k = self.residue_field
        env = {"t": PolyFraction.from_poly(Poly.x(k))}
        if isinstance(k, RationalFunctionField):
            env["u"] = PolyFraction.from_poly(Poly.constant(k, k.gen))
        elif isinstance(k, ExtField):
            env["w"] = PolyFraction.from_poly(Poly.constant(k, k.gen))
        if isinstance(text, int):
            return self.from_int(text)

        def embed(n):
            return PolyFraction.from_poly(Poly.constant(k, k.from_int(n)))

        value = exprparse.evaluate(str(text), env, embed)
        return TLocalScalar(self, value)

    def describe(self) -> dict:
        k = self.residue_field
        if self.kind == "kut":
            return {"kind": "kut", "p": k.char}
        return {"kind": "kt", "q": k.order}

    def __eq__(self, other):
        return isinstance(other, TLocalRing) and other.residue_field == self.residue_field

    def __hash__(self):
        return hash(("kt", self.residue_field))

    def __repr__(self):
        return f"TLocalRing({self.residue_field!r})"


def integers_at(p: int) -> ZpRing:
    return ZpRing(p)


def laurent_at_t(q: int) -> TLocalRing:
    """F_q[t] localized at (t); q a prime power."""
    p, m = _prime_power(q)
    return TLocalRing(finite_field(p, m))


def imperfect_at_t(p: int) -> TLocalRing:
    """F_p(u)[t] localized at (t); imperfect residue field."""
    return TLocalRing(RationalFunctionField(p))


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise InputError(f"{q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    m = 0
    n = q
    while n % p == 0:
        n //= p
        m += 1
    if n != 1:
        raise InputError(f"{q} is not a prime power")
    return p, m


def parse_dvr(doc: dict):
    """Deserialize a backend descriptor: {"kind": "Zp"|"kt"|"kut", ...}."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError(f"bad DVR descriptor: {doc!r}")
    kind = doc["kind"]
    if kind == "Zp":
        return integers_at(int(doc["p"]))
    if kind == "kt":
        return laurent_at_t(int(doc["q"]))
    if kind == "kut":
        return imperfect_at_t(int(doc["p"]))
    raise InputError(f"unknown DVR kind {kind!r}")
