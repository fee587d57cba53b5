"""Residue fields: F_p, F_{p^m} on a fixed power basis, and F_p(u).

F_{p^m} is presented as F_p[w]/(modulus) where the modulus is the first
monic irreducible of degree m in base-p counting order, so presentations
are reproducible across runs. F_p(u) elements are reduced fractions of
polynomials in u with monic denominator; the field is imperfect, which is
exactly why it is shipped (inseparable residue extensions).
"""

from __future__ import annotations

from functools import lru_cache

from . import exprparse
from .errors import InputError
from .polys import Poly, PolyFraction, poly_ext_gcd, poly_gcd, poly_str_compact, pow_mod


class PrimeFieldElt:
    __slots__ = ("field", "value")

    def __init__(self, field: "PrimeField", value: int):
        self.field = field
        self.value = value % field.p

    def __add__(self, other):
        return PrimeFieldElt(self.field, self.value + other.value)

    def __sub__(self, other):
        return PrimeFieldElt(self.field, self.value - other.value)

    def __neg__(self):
        return PrimeFieldElt(self.field, -self.value)

    def __mul__(self, other):
        return PrimeFieldElt(self.field, self.value * other.value)

    def __truediv__(self, other):
        if other.value == 0:
            raise ZeroDivisionError("division by zero in prime field")
        return PrimeFieldElt(self.field, self.value * pow(other.value, -1, self.field.p))

    def __pow__(self, n: int):
        return PrimeFieldElt(self.field, pow(self.value, n, self.field.p))

    def __eq__(self, other):
        return isinstance(other, PrimeFieldElt) and self.value == other.value \
            and self.field.p == other.field.p

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __bool__(self):
        return self.value != 0

    def sort_key(self):
        return (0, self.value)

    def __str__(self):
        return str(self.value)

    def as_factor_str(self):
        return str(self.value)

    def __repr__(self):
        return f"F{self.field.p}({self.value})"


class PrimeField:
    """The prime field F_p."""

    is_finite = True

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.order = p
        self.degree = 1
        self.zero = PrimeFieldElt(self, 0)
        self.one = PrimeFieldElt(self, 1)

    def from_int(self, n: int) -> PrimeFieldElt:
        return PrimeFieldElt(self, n)

    def inverse(self, a: PrimeFieldElt) -> PrimeFieldElt:
        return self.one / a

    def pth_root(self, a: PrimeFieldElt) -> PrimeFieldElt:
        # Frobenius is the identity on F_p.
        return a

    def elements(self):
        return (PrimeFieldElt(self, v) for v in range(self.p))

    def sample(self, rng) -> PrimeFieldElt:
        return PrimeFieldElt(self, rng.randrange(self.p))

    def parse(self, text: str) -> PrimeFieldElt:
        return exprparse.evaluate(str(text), {}, self.from_int)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


def _is_irreducible_mod_p(f: Poly) -> bool:
    """Rabin's test over F_p; f monic of degree >= 1."""
    p = f.field.p
    m = f.degree
    x = Poly.x(f.field)
    if pow_mod(x, p ** m, f) != x % f:
        return False
    primes, k = [], m
    d = 2
    while d * d <= k:
        if k % d == 0:
            primes.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        primes.append(k)
    for ell in primes:
        g = pow_mod(x, p ** (m // ell), f) - x
        if poly_gcd(g, f).degree > 0:
            return False
    return True


@lru_cache(maxsize=None)
def _default_modulus(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree m over F_p in counting order."""
    field = PrimeField(p)
    for count in range(p ** m):
        digits, n = [], count
        for _ in range(m):
            n, r = divmod(n, p)
            digits.append(r)
        candidate = Poly.from_ints(field, digits + [1])
        if _is_irreducible_mod_p(candidate):
            return tuple(digits + [1])
    raise InputError(f"no irreducible of degree {m} over F_{p}")  # pragma: no cover


class ExtFieldElt:
    __slots__ = ("field", "poly")

    def __init__(self, field: "ExtField", poly: Poly):
        self.field = field
        self.poly = poly % field.modulus if poly.degree >= field.degree else poly

    def __add__(self, other):
        return ExtFieldElt(self.field, self.poly + other.poly)

    def __sub__(self, other):
        return ExtFieldElt(self.field, self.poly - other.poly)

    def __neg__(self):
        return ExtFieldElt(self.field, -self.poly)

    def __mul__(self, other):
        return ExtFieldElt(self.field, (self.poly * other.poly) % self.field.modulus)

    def __truediv__(self, other):
        return self * self.field.inverse(other)

    def __pow__(self, n: int):
        if n < 0:
            return self.field.inverse(self) ** (-n)
        result = self.field.one
        acc = self
        while n:
            if n & 1:
                result = result * acc
            acc = acc * acc
            n >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, ExtFieldElt) and self.poly == other.poly \
            and self.field is other.field

    def __hash__(self):
        return hash((self.field.p, self.field.degree, self.poly.coeffs))

    def __bool__(self):
        return not self.poly.is_zero()

    def sort_key(self):
        coords = [self.poly.coeff(i).value for i in range(self.field.degree)]
        return (1, tuple(coords))

    def __str__(self):
        return poly_str_compact(self.poly, "w")

    def as_factor_str(self):
        s = str(self)
        return f"({s})" if ("+" in s or "-" in s[1:]) else s

    def __repr__(self):
        return f"GF({self.field.order})[{self}]"


class ExtField:
    """F_{p^m} presented as F_p[w]/(modulus), m >= 2."""

    is_finite = True

    def __init__(self, p: int, degree: int):
        if degree < 2:
            raise InputError("use PrimeField for degree-1 residue fields")
        self.p = p
        self.char = p
        self.degree = degree
        self.order = p ** degree
        self.base = PrimeField(p)
        self.modulus = Poly.from_ints(self.base, _default_modulus(p, degree))
        self.zero = ExtFieldElt(self, Poly.zero(self.base))
        self.one = ExtFieldElt(self, Poly.one(self.base))
        self.gen = ExtFieldElt(self, Poly.x(self.base))

    def from_int(self, n: int) -> ExtFieldElt:
        return ExtFieldElt(self, Poly.constant(self.base, self.base.from_int(n)))

    def from_coords(self, ints) -> ExtFieldElt:
        return ExtFieldElt(self, Poly.from_ints(self.base, ints))

    def inverse(self, a: ExtFieldElt) -> ExtFieldElt:
        if not a:
            raise ZeroDivisionError("division by zero in extension field")
        d, s, _ = poly_ext_gcd(a.poly, self.modulus)
        if d.degree != 0:
            raise InputError("modulus is not irreducible")  # pragma: no cover
        return ExtFieldElt(self, s.scale(self.base.one / d.coeff(0)) % self.modulus)

    def pth_root(self, a: ExtFieldElt) -> ExtFieldElt:
        # Frobenius has order m, so x -> x^(p^(m-1)) inverts it.
        return a ** (self.p ** (self.degree - 1))

    def elements(self):
        def count(k):
            if k == 0:
                yield []
            else:
                for rest in count(k - 1):
                    for v in range(self.p):
                        yield rest + [v]
        return (self.from_coords(c) for c in count(self.degree))

    def sample(self, rng) -> ExtFieldElt:
        return self.from_coords([rng.randrange(self.p) for _ in range(self.degree)])

    def parse(self, text: str) -> ExtFieldElt:
        return exprparse.evaluate(str(text), {"w": self.gen}, self.from_int)

    def __eq__(self, other):
        return isinstance(other, ExtField) and other.p == self.p \
            and other.degree == self.degree

    def __hash__(self):
        return hash(("Fq", self.p, self.degree))

    def __repr__(self):
        return f"ExtField({self.p}, {self.degree})"


class RatFuncElt:
    """Element of F_p(u): reduced fraction with monic denominator."""

    __slots__ = ("field", "frac")

    def __init__(self, field: "RationalFunctionField", frac: PolyFraction):
        self.field = field
        self.frac = frac

    def __add__(self, other):
        return RatFuncElt(self.field, self.frac + other.frac)

    def __sub__(self, other):
        return RatFuncElt(self.field, self.frac - other.frac)

    def __neg__(self):
        return RatFuncElt(self.field, -self.frac)

    def __mul__(self, other):
        return RatFuncElt(self.field, self.frac * other.frac)

    def __truediv__(self, other):
        return RatFuncElt(self.field, self.frac / other.frac)

    def __pow__(self, n: int):
        return RatFuncElt(self.field, self.frac ** n)

    def __eq__(self, other):
        return isinstance(other, RatFuncElt) and self.frac == other.frac

    def __hash__(self):
        return hash(self.frac)

    def __bool__(self):
        return bool(self.frac)

    def sort_key(self):
        return self.frac.sort_key()

    def is_polynomial(self) -> bool:
        return self.frac.is_polynomial()

    def __str__(self):
        num = poly_str_compact(self.frac.num, "u")
        if self.frac.is_polynomial():
            return num
        den = poly_str_compact(self.frac.den, "u")
        if "+" in num or "-" in num[1:] or "/" in num:
            num = f"({num})"
        if "+" in den or "-" in den[1:] or "*" in den or "^" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def as_factor_str(self):
        s = str(self)
        return f"({s})" if any(op in s for op in ("+", "/")) or "-" in s[1:] else s

    def __repr__(self):
        return f"F{self.field.p}(u)[{self}]"


class RationalFunctionField:
    """F_p(u): an imperfect field of characteristic p."""

    is_finite = False
    order = None

    def __init__(self, p: int):
        self.p = p
        self.char = p
        self.base = PrimeField(p)
        self.zero = RatFuncElt(self, PolyFraction.from_poly(Poly.zero(self.base)))
        self.one = RatFuncElt(self, PolyFraction.from_poly(Poly.one(self.base)))
        self.gen = RatFuncElt(self, PolyFraction.from_poly(Poly.x(self.base)))

    def from_int(self, n: int) -> RatFuncElt:
        return RatFuncElt(self, PolyFraction.from_poly(
            Poly.constant(self.base, self.base.from_int(n))))

    def from_base_poly(self, p: Poly) -> RatFuncElt:
        return RatFuncElt(self, PolyFraction.from_poly(p))

    def inverse(self, a: RatFuncElt) -> RatFuncElt:
        return self.one / a

    def pth_root(self, a: RatFuncElt) -> RatFuncElt | None:
        """The unique p-th root when one exists, else None (u has none)."""
        if not a:
            return self.zero
        num = self._poly_pth_root(a.frac.num)
        den = self._poly_pth_root(a.frac.den)
        if num is None or den is None:
            return None
        return RatFuncElt(self, PolyFraction(num, den))

    def _poly_pth_root(self, f: Poly) -> Poly | None:
        # f is a p-th power iff only exponents divisible by p occur
        # (coefficients in F_p are fixed by Frobenius).
        p = self.p
        out = []
        for i, c in enumerate(f.coeffs):
            if i % p == 0:
                out.append(c)
            elif c:
                return None
        return Poly(self.base, out)

    def sample(self, rng) -> RatFuncElt:
        num = Poly.from_ints(self.base, [rng.randrange(self.p) for _ in range(3)])
        return self.from_base_poly(num)

    def parse(self, text: str) -> RatFuncElt:
        return exprparse.evaluate(str(text), {"u": self.gen}, self.from_int)

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.p == self.p

    def __hash__(self):
        return hash(("Fpu", self.p))

    def __repr__(self):
        return f"RationalFunctionField({self.p})"


def finite_field(p: int, degree: int = 1):
    """F_{p^degree} with the package's deterministic presentation."""
    return PrimeField(p) if degree == 1 else ExtField(p, degree)
